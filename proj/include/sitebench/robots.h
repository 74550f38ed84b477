#ifndef SITEBENCH_ROBOTS_H_
#define SITEBENCH_ROBOTS_H_

#include <string_view>

#include "sitebench/http_fetch.h"

namespace sitebench {

// Product token matched against User-agent lines.
inline constexpr std::string_view kRobotsToken = "sitebench";

enum class RobotsVerdict { kAllow, kDeny };

std::string_view RobotsVerdictName(RobotsVerdict v);

// True when the group for "*" or for |agent_token| disallows the whole site
// ("Disallow: /" or "Disallow: /*") and does not allow "/" again.
bool RobotsDisallowsRoot(std::string_view robots_txt,
                         std::string_view agent_token = kRobotsToken);

// honor=false allows without any request. Otherwise fetches
// <origin>/robots.txt once; anything but a 200 response allows.
RobotsVerdict CheckRobots(std::string_view site_url,
                          bool honor,
                          const HttpFetcher& fetcher,
                          std::string_view agent_token = kRobotsToken);

}  // namespace sitebench

#endif  // SITEBENCH_ROBOTS_H_
