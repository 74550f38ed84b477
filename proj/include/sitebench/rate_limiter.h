#ifndef SITEBENCH_RATE_LIMITER_H_
#define SITEBENCH_RATE_LIMITER_H_

#include <chrono>
#include <map>
#include <mutex>
#include <set>
#include <string>

#include "sitebench/model.h"

namespace sitebench {

class ScanClock {
 public:
  virtual ~ScanClock() = default;
  virtual TimePoint Now() const = 0;
};

class SystemScanClock : public ScanClock {
 public:
  TimePoint Now() const override { return Clock::now(); }
};

// Clock that only moves when told to.
class ManualClock : public ScanClock {
 public:
  explicit ManualClock(TimePoint start = FromUnixSeconds(1792108800))
      : now_(start) {}
  TimePoint Now() const override;
  void Set(TimePoint t);
  void Advance(Clock::duration d);

 private:
  mutable std::mutex mu_;
  TimePoint now_;
};

// Grants job starts. Two starts for one host are at least
// |per_host_min_interval| apart, a host runs at most one job at a time, and
// at most |global_concurrency| jobs run overall. Thread-safe.
class RateLimiter {
 public:
  RateLimiter(Clock::duration per_host_min_interval, int global_concurrency);

  // Records a start and returns true when all three limits allow it.
  bool TryAcquire(const std::string& host, TimePoint now);
  // Ends the running job of |host|.
  void Release(const std::string& host);

  // Earliest start for |host| under the interval rule alone.
  TimePoint NextAllowed(const std::string& host) const;
  // True while a start for |host| at |now| would be refused by the interval
  // or one-job-per-host rule.
  bool Defers(const std::string& host, TimePoint now) const;

  // Seeds the last start of |host|, e.g. from stored runs after a restart.
  void NoteStart(const std::string& host, TimePoint at);

  int running() const;
  Clock::duration interval() const { return interval_; }

 private:
  bool DefersLocked(const std::string& host, TimePoint now) const;

  const Clock::duration interval_;
  const int concurrency_;
  mutable std::mutex mu_;
  std::map<std::string, TimePoint> last_start_;
  std::set<std::string> running_;
};

}  // namespace sitebench

#endif  // SITEBENCH_RATE_LIMITER_H_
