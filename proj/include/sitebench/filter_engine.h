#ifndef SITEBENCH_FILTER_ENGINE_H_
#define SITEBENCH_FILTER_ENGINE_H_

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sitebench {

// Adblock-style tracker list support. The grammar subset covers comments,
// section headers, `||host^` domain anchors, `@@` exceptions, `*`, `^` and
// `|` anchors. `$options` are stripped; element-hiding and regex rules are
// skipped.

struct PatternToken {
  enum class Kind { kLiteral, kWildcard, kSeparator };
  Kind kind = Kind::kLiteral;
  std::string text;  // only for kLiteral

  bool operator==(const PatternToken&) const = default;
};

struct FilterRule {
  enum class Kind { kDomainAnchor, kPlain, kException };

  std::string raw;
  Kind kind = Kind::kPlain;
  bool exception = false;
  bool domain_anchor = false;
  bool start_anchor = false;
  bool end_anchor = false;
  std::vector<PatternToken> tokens;
  std::string options;  // text after '$', without the '$'
  // Lowercased host prefix of a domain-anchored pattern; empty otherwise.
  std::string anchor_host;
  // True when anchor_host is terminated by a separator, '/', ':' or '?', so
  // a match can only start at a host label boundary equal to anchor_host.
  bool anchor_host_complete = false;
  int source_line = 0;

  // Rebuilds the rule text from anchors, tokens and options.
  std::string Serialize() const;
};

struct FilterSet {
  std::vector<FilterRule> rules;
  // Every domain-anchored rule (block or exception) under its anchor host.
  std::map<std::string, std::vector<size_t>> domain_index;
  // Rules the index cannot pre-select: plain rules and domain-anchored rules
  // whose anchor host is partial.
  std::vector<size_t> unindexed;
  int skipped_lines = 0;
};

// Total: unparseable or unsupported lines are counted in skipped_lines.
FilterSet ParseFilterList(std::string_view text);

// True iff some block rule matches |url| and no exception rule does. Throws
// MalformedUrl when |url| is not an absolute http(s) URL.
bool Matches(const FilterSet& fs, std::string_view url);

// Reference path for tests: evaluates every rule without the domain index.
bool MatchesLinear(const FilterSet& fs, std::string_view url);

// Whether a single rule's pattern matches |url| (ignores exception-ness).
bool RuleMatches(const FilterRule& rule, std::string_view url);

// Hosts whose request URL matched. Order-independent.
std::set<std::string> ClassifyHosts(const FilterSet& fs,
                                    std::span<const std::string> request_urls);

}  // namespace sitebench

#endif  // SITEBENCH_FILTER_ENGINE_H_
