#ifndef SITEBENCH_RANKING_H_
#define SITEBENCH_RANKING_H_

#include <array>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sitebench/catalog.h"
#include "sitebench/facts.h"
#include "sitebench/model.h"

namespace sitebench {

class EmptyGroup : public std::invalid_argument {
 public:
  explicit EmptyGroup(const std::string& what) : std::invalid_argument(what) {}
};

// One result per catalog entry, in catalog order. Checks whose fact bundle
// is missing get outcome error.
std::vector<CheckResult> EvaluateChecks(
    const ScanFacts& facts,
    const CheckCatalog& catalog = CheckCatalog::Default());

// red if a critical check failed, green if every check passed, neutral if
// every check is neutral or error, yellow otherwise. Throws EmptyGroup.
Color RateGroup(std::span<const CheckResult> results);

// Rates each group present in |results| and the overall (worst) color.
SiteRating RateSite(std::string site_ref,
                    std::string url,
                    std::span<const CheckResult> results);

Color WorstColor(const std::map<CheckGroup, Color>& ratings);

// Strict weak order of rank_sites: colors compared group by group in the
// scheme's priority, then URL ascending.
bool RanksBefore(const SiteRating& a,
                 const SiteRating& b,
                 const RankingScheme& scheme);

// Site refs in ranking order. Independent of input order.
std::vector<std::string> RankSites(std::vector<SiteRating> ratings,
                                   const RankingScheme& scheme);

// Count of each color per group, indexed by Color.
using ColorCounts = std::map<CheckGroup, std::array<int, 4>>;
ColorCounts AggregateListStats(std::span<const SiteRating> ratings);

}  // namespace sitebench

#endif  // SITEBENCH_RANKING_H_
