#ifndef SITEBENCH_STORAGE_H_
#define SITEBENCH_STORAGE_H_

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sitebench/model.h"

struct sqlite3;

namespace sitebench {

class StorageError : public std::runtime_error {
 public:
  explicit StorageError(const std::string& what) : std::runtime_error(what) {}
};

// A queued or running scan. A job and the run it produces share one id.
struct ScanJob {
  std::string id;
  std::string site_ref;
  std::optional<std::string> list_ref;
  std::string url;
  std::string host;
  TimePoint enqueued_at;
  int attempts = 0;
  ScanStatus state = ScanStatus::kQueued;
};

struct ListQuery {
  std::string q;
  std::string tag;
  int limit = 50;
  int offset = 0;
};

struct ListPage {
  std::vector<SiteList> lists;
  int total = 0;
};

// Site as stored, with the list it belongs to (none for one-off scans).
struct StoredSite {
  Site site;
  std::optional<std::string> list_ref;
};

// Lists, sites, jobs and runs in one SQLite database. ":memory:" gives a
// private in-memory store. All methods are thread-safe and each one is a
// single transaction.
class Storage {
 public:
  explicit Storage(const std::string& path);
  virtual ~Storage();
  Storage(const Storage&) = delete;
  Storage& operator=(const Storage&) = delete;

  // Assigns ids to the list and its sites, then inserts them.
  void CreateList(SiteList& list);
  std::optional<SiteList> GetList(const std::string& id) const;
  // Public lists only, newest first; |lists| carry no sites.
  ListPage FindLists(const ListQuery& query) const;
  // Replaces metadata and sites. Sites keep their id (and run history) when
  // their URL stays in the list; new sites get fresh ids.
  void UpdateList(SiteList& list);
  // Removes the list with its sites and runs. False when unknown.
  bool DeleteList(const std::string& id);

  std::optional<StoredSite> GetSite(const std::string& id) const;
  // The unlisted site for |url|, created on first use.
  Site UnlistedSite(const std::string& url);

  // Appends a run (any status) and returns its id. run.id is assigned when
  // empty.
  std::string InsertRun(ScanRun& run, TimePoint enqueued_at, int attempts);
  std::optional<ScanJob> ActiveJobForSite(const std::string& site_id) const;
  std::optional<ScanJob> GetJob(const std::string& id) const;
  std::optional<ScanRun> GetRun(const std::string& id) const;

  // Atomically picks the oldest queued job whose host passes |admit| and
  // marks it running with attempts+1 and started_at=now. |admit| runs under
  // the storage lock and must not call back into Storage.
  std::optional<ScanJob> ClaimNext(
      TimePoint now,
      const std::function<bool(const ScanJob&)>& admit);

  // Writes the outcome of a running job.
  virtual void CompleteRun(const ScanRun& run);
  // running -> queued, e.g. after an infrastructure fault.
  void RequeueJob(const std::string& id, const std::string& note);
  // Running jobs that started before |cutoff| (lost workers) go back to
  // the queue, or fail once they used |max_attempts|.
  int RequeueStale(TimePoint cutoff, int max_attempts);
  // queued -> blacklisted for the given jobs.
  void MarkBlacklisted(const std::vector<std::string>& ids,
                       const std::string& note,
                       TimePoint now);
  bool HasActiveJobForHost(const std::string& host) const;

  // Newest run with status done for the site.
  std::optional<ScanRun> LatestDoneRun(const std::string& site_id) const;
  // All runs of the site, oldest first, without facts or results.
  std::vector<ScanRun> RunHistory(const std::string& site_id) const;

  // Sites of rescan-enabled lists whose newest done run finished before
  // |cutoff| (or that never finished a run) and have no active job.
  std::vector<StoredSite> SitesDueForRescan(TimePoint cutoff) const;
  // Latest job start per host.
  std::map<std::string, TimePoint> LastStartPerHost() const;
  int CountJobs(ScanStatus state) const;

 private:
  void Exec(const char* sql) const;
  void Migrate();

  mutable std::mutex mu_;
  sqlite3* db_ = nullptr;
};

}  // namespace sitebench

#endif  // SITEBENCH_STORAGE_H_
