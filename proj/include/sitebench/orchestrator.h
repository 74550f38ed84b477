#ifndef SITEBENCH_ORCHESTRATOR_H_
#define SITEBENCH_ORCHESTRATOR_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sitebench/blacklist.h"
#include "sitebench/rate_limiter.h"
#include "sitebench/robots.h"
#include "sitebench/site_scanner.h"
#include "sitebench/storage.h"

namespace sitebench {

// The network side of a job. Replaceable in tests.
class JobScanner {
 public:
  virtual ~JobScanner() = default;
  virtual SiteScanOutput Scan(const std::string& url) = 0;
  virtual RobotsVerdict Robots(const std::string& url, bool honor) = 0;
};

class NetworkJobScanner : public JobScanner {
 public:
  explicit NetworkJobScanner(ScanContext context)
      : context_(std::move(context)), fetcher_(context_.net) {}
  SiteScanOutput Scan(const std::string& url) override;
  RobotsVerdict Robots(const std::string& url, bool honor) override;

 private:
  ScanContext context_;
  HttpFetcher fetcher_;
};

struct OrchestratorOptions {
  int worker_count = 4;
  Clock::duration per_host_min_interval = std::chrono::minutes(10);
  int global_concurrency = 8;
  Clock::duration rescan_interval = std::chrono::hours(24 * 7);
  int max_attempts = 2;
  // Running jobs older than this are assumed lost.
  Clock::duration stale_after = std::chrono::hours(1);
  // Worker wait between queue polls when nothing is admissible.
  std::chrono::milliseconds poll_interval{500};
  // Period of the rescan and stale-job sweep in background mode.
  std::chrono::milliseconds sweep_interval{60000};
};

struct EnqueueResult {
  ScanJob job;
  // An active job for the site existed and is returned instead.
  bool duplicate = false;
};

inline constexpr char kBlacklistNote[] =
    "The site owner opted out of scanning; no request was made.";
inline constexpr char kUnreachableNote[] = "site unreachable";
inline constexpr char kRobotsNote[] =
    "robots.txt disallows scanning and the list honors robots.txt.";

// Queues scan jobs in Storage and runs them under the rate limiter and the
// blacklist. RunOnce/RunUntilIdle drive it synchronously; Start() adds
// worker threads and a periodic sweep.
class Orchestrator {
 public:
  Orchestrator(Storage& storage,
               Blacklist& blacklist,
               JobScanner& scanner,
               const ScanClock& clock,
               OrchestratorOptions options = {});
  ~Orchestrator();
  Orchestrator(const Orchestrator&) = delete;
  Orchestrator& operator=(const Orchestrator&) = delete;

  // Blacklisted sites get a finished blacklisted job at once; a site with an
  // active job gets that job back.
  EnqueueResult Enqueue(const Site& site,
                        const std::optional<std::string>& list_ref);

  // Claims and runs one admissible job. False when none was admissible.
  bool RunOnce();
  // Runs jobs until none is admissible at the current time.
  int RunUntilIdle();

  // Enqueues every rescan-enabled site whose latest run is older than the
  // rescan interval.
  std::vector<ScanJob> ScheduleRescans();
  // Requeues jobs of lost workers.
  int RecoverStale();

  // True when a job for |host| is active or one started within the
  // per-host interval.
  bool HostDeferred(const std::string& host) const;

  void Start();
  void Stop();

  RateLimiter& limiter() { return limiter_; }
  const OrchestratorOptions& options() const { return options_; }

 private:
  void RunJob(const ScanJob& job);
  void Finish(const ScanJob& job, ScanRun run);
  void WorkerLoop();
  void SweepLoop();

  Storage& storage_;
  Blacklist& blacklist_;
  JobScanner& scanner_;
  const ScanClock& clock_;
  const OrchestratorOptions options_;
  RateLimiter limiter_;

  std::mutex enqueue_mu_;
  std::mutex wake_mu_;
  std::condition_variable wake_;
  uint64_t enqueued_seq_ = 0;  // guarded by wake_mu_
  std::atomic<bool> stopping_{false};
  std::vector<std::thread> threads_;
};

}  // namespace sitebench

#endif  // SITEBENCH_ORCHESTRATOR_H_
