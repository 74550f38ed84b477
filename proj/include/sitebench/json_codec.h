#ifndef SITEBENCH_JSON_CODEC_H_
#define SITEBENCH_JSON_CODEC_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sitebench/facts.h"
#include "sitebench/model.h"

namespace sitebench {

using Json = nlohmann::json;

class JsonError : public std::runtime_error {
 public:
  explicit JsonError(const std::string& what) : std::runtime_error(what) {}
};

// "2026-10-16T08:30:00Z" (UTC, second precision).
std::string FormatTimestamp(TimePoint t);
std::optional<TimePoint> ParseTimestamp(std::string_view text);

// Decoders throw JsonError on missing fields, wrong types or unknown enum
// names. Encoders are total; decode(encode(x)) == x.
Json FactsToJson(const ScanFacts& facts);
ScanFacts FactsFromJson(const Json& j);

Json ResultsToJson(const std::vector<CheckResult>& results);
std::vector<CheckResult> ResultsFromJson(const Json& j);

Json PropertiesToJson(const Properties& properties);
Properties PropertiesFromJson(const Json& j);

Json RunToJson(const ScanRun& run);
ScanRun RunFromJson(const Json& j);

Json RatingToJson(const SiteRating& rating);

// Serializes with invalid UTF-8 replaced by U+FFFD instead of throwing.
std::string DumpJson(const Json& j, int indent = -1);

}  // namespace sitebench

#endif  // SITEBENCH_JSON_CODEC_H_
