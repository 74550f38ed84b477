#include "sitebench/rate_limiter.h"

#include <algorithm>

namespace sitebench {

TimePoint ManualClock::Now() const {
  std::lock_guard lock(mu_);
  return now_;
}

void ManualClock::Set(TimePoint t) {
  std::lock_guard lock(mu_);
  now_ = t;
}

void ManualClock::Advance(Clock::duration d) {
  std::lock_guard lock(mu_);
  now_ += d;
}

RateLimiter::RateLimiter(Clock::duration per_host_min_interval,
                         int global_concurrency)
    : interval_(per_host_min_interval),
      concurrency_(std::max(1, global_concurrency)) {}

bool RateLimiter::DefersLocked(const std::string& host, TimePoint now) const {
  if (running_.count(host))
    return true;
  auto it = last_start_.find(host);
  return it != last_start_.end() && now < it->second + interval_;
}

bool RateLimiter::TryAcquire(const std::string& host, TimePoint now) {
  std::lock_guard lock(mu_);
  if (static_cast<int>(running_.size()) >= concurrency_ ||
      DefersLocked(host, now))
    return false;
  running_.insert(host);
  last_start_[host] = now;
  return true;
}

void RateLimiter::Release(const std::string& host) {
  std::lock_guard lock(mu_);
  running_.erase(host);
}

TimePoint RateLimiter::NextAllowed(const std::string& host) const {
  std::lock_guard lock(mu_);
  auto it = last_start_.find(host);
  return it == last_start_.end() ? TimePoint::min() : it->second + interval_;
}

bool RateLimiter::Defers(const std::string& host, TimePoint now) const {
  std::lock_guard lock(mu_);
  return DefersLocked(host, now);
}

void RateLimiter::NoteStart(const std::string& host, TimePoint at) {
  std::lock_guard lock(mu_);
  TimePoint& last = last_start_[host];
  last = std::max(last, at);
}

int RateLimiter::running() const {
  std::lock_guard lock(mu_);
  return static_cast<int>(running_.size());
}

}  // namespace sitebench
