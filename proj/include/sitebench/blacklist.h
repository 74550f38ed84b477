#ifndef SITEBENCH_BLACKLIST_H_
#define SITEBENCH_BLACKLIST_H_

#include <filesystem>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sitebench/model.h"

namespace sitebench {

class BlacklistError : public std::runtime_error {
 public:
  explicit BlacklistError(const std::string& what) : std::runtime_error(what) {}
};

// An entry containing "://" is a URL prefix; anything else is a host that
// also covers its subdomains.
struct BlacklistEntry {
  std::string pattern;
  std::string note;
  TimePoint added_at;

  bool is_url_prefix() const {
    return pattern.find("://") != std::string::npos;
  }
};

// Opt-out list. File format: one "pattern<TAB>added_at<TAB>note" line per
// entry, '#' comments. Thread-safe.
class Blacklist {
 public:
  // In-memory list.
  Blacklist() = default;
  // Backed by |path|; a missing file is an empty list. Throws BlacklistError
  // on malformed content.
  explicit Blacklist(std::filesystem::path path);

  // Normalizes |pattern| and adds it. Returns false when an equal entry is
  // already present. Persists before returning when file-backed. Throws
  // BlacklistError on an empty or malformed pattern.
  bool Add(std::string_view pattern,
           std::string_view note,
           TimePoint added_at = Clock::now());

  // The first entry covering |url| (an absolute URL or a bare host).
  std::optional<BlacklistEntry> Match(std::string_view url) const;

  std::vector<BlacklistEntry> entries() const;

  // Re-reads the backing file when it changed on disk since the last read.
  void Refresh();

  static std::string NormalizePattern(std::string_view pattern);
  static std::vector<BlacklistEntry> Parse(std::string_view text);
  static std::string Serialize(const std::vector<BlacklistEntry>& entries);

 private:
  void LoadLocked();
  void SaveLocked() const;

  std::filesystem::path path_;
  std::filesystem::file_time_type loaded_mtime_{};
  mutable std::mutex mu_;
  std::vector<BlacklistEntry> entries_;
};

}  // namespace sitebench

#endif  // SITEBENCH_BLACKLIST_H_
