#include "sitebench/orchestrator.h"

#include "sitebench/url.h"

namespace sitebench {

SiteScanOutput NetworkJobScanner::Scan(const std::string& url) {
  return ScanSite(url, context_);
}

RobotsVerdict NetworkJobScanner::Robots(const std::string& url, bool honor) {
  return CheckRobots(url, honor, fetcher_);
}

Orchestrator::Orchestrator(Storage& storage,
                           Blacklist& blacklist,
                           JobScanner& scanner,
                           const ScanClock& clock,
                           OrchestratorOptions options)
    : storage_(storage),
      blacklist_(blacklist),
      scanner_(scanner),
      clock_(clock),
      options_(options),
      limiter_(options.per_host_min_interval, options.global_concurrency) {
  for (const auto& [host, at] : storage_.LastStartPerHost())
    limiter_.NoteStart(host, at);
}

Orchestrator::~Orchestrator() {
  Stop();
}

EnqueueResult Orchestrator::Enqueue(
    const Site& site,
    const std::optional<std::string>& list_ref) {
  std::lock_guard lock(enqueue_mu_);
  TimePoint now = clock_.Now();
  ScanRun run;
  run.site_ref = site.id;
  run.list_ref = list_ref;
  run.url = site.url;
  blacklist_.Refresh();
  if (blacklist_.Match(site.url)) {
    run.status = ScanStatus::kBlacklisted;
    run.started_at = now;
    run.finished_at = now;
    run.note = kBlacklistNote;
    storage_.InsertRun(run, now, 0);
    return {*storage_.GetJob(run.id), false};
  }
  if (auto active = storage_.ActiveJobForSite(site.id))
    return {*active, true};
  run.status = ScanStatus::kQueued;
  storage_.InsertRun(run, now, 0);
  {
    std::lock_guard wake_lock(wake_mu_);
    ++enqueued_seq_;
  }
  wake_.notify_all();
  return {*storage_.GetJob(run.id), false};
}

bool Orchestrator::RunOnce() {
  TimePoint now = clock_.Now();
  blacklist_.Refresh();
  std::vector<std::string> opted_out;
  std::optional<std::string> acquired;
  std::optional<ScanJob> job;
  try {
    job = storage_.ClaimNext(now, [&](const ScanJob& candidate) {
      if (blacklist_.Match(candidate.url)) {
        opted_out.push_back(candidate.id);
        return false;
      }
      if (!limiter_.TryAcquire(candidate.host, now))
        return false;
      acquired = candidate.host;
      return true;
    });
  } catch (...) {
    if (acquired)
      limiter_.Release(*acquired);
    throw;
  }
  if (!opted_out.empty())
    storage_.MarkBlacklisted(opted_out, kBlacklistNote, now);
  if (!job)
    return false;
  struct SlotGuard {
    RateLimiter& limiter;
    std::string host;
    ~SlotGuard() { limiter.Release(host); }
  } guard{limiter_, job->host};
  RunJob(*job);
  return true;
}

int Orchestrator::RunUntilIdle() {
  int count = 0;
  while (RunOnce())
    ++count;
  return count;
}

void Orchestrator::RunJob(const ScanJob& job) {
  ScanRun run;
  run.id = job.id;
  run.site_ref = job.site_ref;
  run.list_ref = job.list_ref;
  run.url = job.url;
  run.started_at = clock_.Now();

  bool honor = false;
  if (job.list_ref) {
    if (auto list = storage_.GetList(*job.list_ref))
      honor = list->honor_robots;
  }
  if (scanner_.Robots(job.url, honor) == RobotsVerdict::kDeny) {
    run.status = ScanStatus::kFailed;
    run.note = kRobotsNote;
    Finish(job, std::move(run));
    return;
  }

  try {
    SiteScanOutput out = scanner_.Scan(job.url);
    run.facts = std::move(out.facts);
    run.check_results = std::move(out.results);
    run.module_errors = std::move(out.module_errors);
    run.status = ScanStatus::kDone;
    if (!out.reachable)
      run.note = kUnreachableNote;
  } catch (const std::exception& e) {
    run.status = ScanStatus::kFailed;
    run.note = std::string("scan aborted: ") + e.what();
  }
  Finish(job, std::move(run));
}

void Orchestrator::Finish(const ScanJob& job, ScanRun run) {
  run.finished_at = clock_.Now();
  try {
    storage_.CompleteRun(run);
    return;
  } catch (const StorageError& e) {
    std::string note = std::string("storing results failed: ") + e.what();
    if (job.attempts < options_.max_attempts) {
      storage_.RequeueJob(job.id, note);
      return;
    }
    ScanRun failed;
    failed.id = run.id;
    failed.site_ref = run.site_ref;
    failed.list_ref = run.list_ref;
    failed.url = run.url;
    failed.status = ScanStatus::kFailed;
    failed.started_at = run.started_at;
    failed.finished_at = run.finished_at;
    failed.note = note;
    // A failure here leaves the job running; RecoverStale settles it.
    try {
      storage_.CompleteRun(failed);
    } catch (const StorageError&) {
    }
  }
}

std::vector<ScanJob> Orchestrator::ScheduleRescans() {
  std::vector<ScanJob> jobs;
  TimePoint cutoff = clock_.Now() - options_.rescan_interval;
  for (const StoredSite& s : storage_.SitesDueForRescan(cutoff)) {
    EnqueueResult r = Enqueue(s.site, s.list_ref);
    if (!r.duplicate)
      jobs.push_back(r.job);
  }
  return jobs;
}

int Orchestrator::RecoverStale() {
  return storage_.RequeueStale(clock_.Now() - options_.stale_after,
                               options_.max_attempts);
}

bool Orchestrator::HostDeferred(const std::string& host) const {
  return storage_.HasActiveJobForHost(host) ||
         limiter_.Defers(host, clock_.Now());
}

void Orchestrator::Start() {
  if (!threads_.empty())
    return;
  stopping_ = false;
  RecoverStale();
  for (int i = 0; i < options_.worker_count; ++i)
    threads_.emplace_back([this] { WorkerLoop(); });
  threads_.emplace_back([this] { SweepLoop(); });
}

void Orchestrator::Stop() {
  {
    std::lock_guard lock(wake_mu_);
    stopping_ = true;
  }
  wake_.notify_all();
  for (std::thread& t : threads_)
    t.join();
  threads_.clear();
}

void Orchestrator::WorkerLoop() {
  while (!stopping_) {
    uint64_t seen;
    {
      std::lock_guard lock(wake_mu_);
      seen = enqueued_seq_;
    }
    bool ran = false;
    try {
      ran = RunOnce();
    } catch (const std::exception&) {
      // Storage trouble; retry after the poll interval.
    }
    if (ran)
      continue;
    std::unique_lock lock(wake_mu_);
    wake_.wait_for(lock, options_.poll_interval, [this, seen] {
      return stopping_.load() || enqueued_seq_ != seen;
    });
  }
}

void Orchestrator::SweepLoop() {
  while (!stopping_) {
    try {
      RecoverStale();
      ScheduleRescans();
    } catch (const std::exception&) {
    }
    std::unique_lock lock(wake_mu_);
    wake_.wait_for(lock, options_.sweep_interval,
                   [this] { return stopping_.load(); });
  }
}

}  // namespace sitebench
