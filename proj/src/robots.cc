#include "sitebench/robots.h"

#include <sstream>
#include <string>
#include <vector>

#include "sitebench/url.h"

namespace sitebench {

namespace {

struct Group {
  std::vector<std::string> agents;
  bool disallow_root = false;
  bool allow_root = false;
};

std::vector<Group> ParseGroups(std::string_view text) {
  std::vector<Group> groups;
  bool in_agent_lines = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    auto colon = line.find(':');
    if (colon == std::string_view::npos)
      continue;
    std::string field = ToLowerAscii(TrimWhitespace(line.substr(0, colon)));
    std::string_view value = TrimWhitespace(line.substr(colon + 1));
    if (field == "user-agent") {
      if (!in_agent_lines)
        groups.emplace_back();
      groups.back().agents.push_back(ToLowerAscii(value));
      in_agent_lines = true;
      continue;
    }
    in_agent_lines = false;
    if (groups.empty())
      continue;
    if (field == "disallow" && (value == "/" || value == "/*"))
      groups.back().disallow_root = true;
    else if (field == "allow" && (value == "/" || value == "/*"))
      groups.back().allow_root = true;
  }
  return groups;
}

}  // namespace

std::string_view RobotsVerdictName(RobotsVerdict v) {
  return v == RobotsVerdict::kAllow ? "allow" : "deny";
}

bool RobotsDisallowsRoot(std::string_view robots_txt,
                         std::string_view agent_token) {
  std::string token = ToLowerAscii(agent_token);
  for (const Group& g : ParseGroups(robots_txt)) {
    for (const std::string& agent : g.agents) {
      if ((agent == "*" || agent == token) && g.disallow_root && !g.allow_root)
        return true;
    }
  }
  return false;
}

RobotsVerdict CheckRobots(std::string_view site_url,
                          bool honor,
                          const HttpFetcher& fetcher,
                          std::string_view agent_token) {
  if (!honor)
    return RobotsVerdict::kAllow;
  auto parts = ParseUrl(site_url);
  if (!parts)
    return RobotsVerdict::kAllow;
  FetchLimits limits;
  limits.timeout = fetcher.options().timeout;
  limits.max_redirects = 0;
  limits.max_body = 512 * 1024;
  limits.truncate_body = true;
  FetchResult result = fetcher.Get(parts->Origin() + "/robots.txt", limits);
  if (result.error != FetchError::kNone || result.response.status != 200)
    return RobotsVerdict::kAllow;
  return RobotsDisallowsRoot(result.response.body, agent_token)
             ? RobotsVerdict::kDeny
             : RobotsVerdict::kAllow;
}

}  // namespace sitebench
