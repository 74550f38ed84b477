#ifndef SITEBENCH_MODEL_H_
#define SITEBENCH_MODEL_H_

#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sitebench/facts.h"

namespace sitebench {

using Clock = std::chrono::system_clock;
using TimePoint = Clock::time_point;

int64_t ToUnixSeconds(TimePoint t);
TimePoint FromUnixSeconds(int64_t s);

enum class CheckGroup { kNoTrack, kAttacks, kEncWeb, kEncMail };

inline constexpr std::array<CheckGroup, 4> kAllGroups = {
    CheckGroup::kNoTrack, CheckGroup::kAttacks, CheckGroup::kEncWeb,
    CheckGroup::kEncMail};

std::string_view GroupName(CheckGroup group);
std::optional<CheckGroup> ParseGroup(std::string_view name);

enum class Outcome { kPass, kFail, kNeutral, kError };

std::string_view OutcomeName(Outcome outcome);
std::optional<Outcome> ParseOutcome(std::string_view name);

// Declaration order is the severity order used for ranking:
// green < yellow < neutral < red.
enum class Color { kGreen, kYellow, kNeutral, kRed };

std::string_view ColorName(Color color);
std::optional<Color> ParseColor(std::string_view name);

struct CheckResult {
  std::string check_id;
  CheckGroup group = CheckGroup::kNoTrack;
  Outcome outcome = Outcome::kError;
  bool critical = false;
  std::string evidence;

  bool operator==(const CheckResult&) const = default;
};

using Properties = std::map<std::string, std::optional<std::string>>;

struct Site {
  std::string id;
  std::string url;
  std::optional<std::string> final_url;
  Properties properties;

  bool operator==(const Site&) const = default;
};

class InvalidSiteList : public std::runtime_error {
 public:
  explicit InvalidSiteList(const std::string& what)
      : std::runtime_error(what) {}
};

struct SiteList {
  std::string id;
  std::string title;
  std::string description;
  std::vector<std::string> tags;
  std::vector<Site> sites;
  std::vector<std::string> property_schema;
  std::string access_token_hash;
  bool is_private = false;
  bool rescan_enabled = true;
  bool honor_robots = false;
  TimePoint created_at;
};

// Throws InvalidSiteList when the list is empty, has duplicate normalized
// URLs, lacks a token hash, or a site's property keys differ from the schema.
void ValidateSiteList(const SiteList& list);

// Fills missing schema keys with explicit nulls and drops unknown keys.
void ConformProperties(SiteList& list);

enum class ScanStatus { kQueued, kRunning, kDone, kFailed, kBlacklisted };

std::string_view ScanStatusName(ScanStatus status);
std::optional<ScanStatus> ParseScanStatus(std::string_view name);

struct ScanRun {
  std::string id;
  std::string site_ref;
  std::optional<std::string> list_ref;
  std::string url;
  TimePoint started_at;
  TimePoint finished_at;
  ScanStatus status = ScanStatus::kQueued;
  ScanFacts facts;
  std::vector<CheckResult> check_results;
  // Per-module failure notes, e.g. "content: ConnectionFailed".
  std::vector<std::string> module_errors;
  std::string note;
};

struct RankingScheme {
  std::string name = "default";
  std::string kind = "group_order";
  std::array<CheckGroup, 4> group_order = kAllGroups;
};

class InvalidGroupOrder : public std::invalid_argument {
 public:
  explicit InvalidGroupOrder(const std::string& what)
      : std::invalid_argument(what) {}
};

// Parses "EncWeb,NoTrack,Attacks,EncMail". Throws InvalidGroupOrder unless the
// text names every group exactly once.
RankingScheme ParseGroupOrder(std::string_view text);
std::string FormatGroupOrder(const RankingScheme& scheme);

struct SiteRating {
  std::string site_ref;
  std::string url;
  std::map<CheckGroup, Color> group_ratings;
  Color overall = Color::kNeutral;
};

}  // namespace sitebench

#endif  // SITEBENCH_MODEL_H_
