#include "sitebench/filter_engine.h"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "sitebench/url.h"

namespace sitebench {

namespace {

bool IsAnchorHostChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' ||
         c == '_';
}

bool IsSeparator(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  if (u >= 0x80)
    return true;
  return !(std::isalnum(u) || c == '_' || c == '-' || c == '.' || c == '%');
}

// Options that make a rule irrelevant for classifying third-party requests:
// first-party-only rules and page-level toggles without request semantics.
bool OptionsDisableRule(std::string_view options) {
  size_t begin = 0;
  while (begin <= options.size()) {
    size_t end = begin;
    while (end < options.size() && options[end] != ',')
      ++end;
    size_t name_end = begin;
    while (name_end < end && options[name_end] != '=')
      ++name_end;
    std::string_view name = options.substr(begin, name_end - begin);
    if (name == "~third-party" || name == "first-party" || name == "elemhide" ||
        name == "generichide" || name == "popup")
      return true;
    begin = end + 1;
  }
  return false;
}

bool LooksLikeOptions(std::string_view options) {
  if (options.empty())
    return false;
  std::string_view rest = options;
  while (true) {
    auto comma = rest.find(',');
    std::string_view opt = rest.substr(0, comma);
    std::string_view name = opt.substr(0, opt.find('='));
    if (!name.empty() && name.front() == '~')
      name.remove_prefix(1);
    if (name.empty())
      return false;
    for (char c : name) {
      if (!(std::islower(static_cast<unsigned char>(c)) ||
            std::isdigit(static_cast<unsigned char>(c)) || c == '-' ||
            c == '_'))
        return false;
    }
    if (comma == std::string_view::npos)
      return true;
    rest.remove_prefix(comma + 1);
  }
}

std::vector<PatternToken> Tokenize(std::string_view pattern) {
  std::vector<PatternToken> tokens;
  for (char c : pattern) {
    if (c == '*') {
      tokens.push_back({PatternToken::Kind::kWildcard, {}});
    } else if (c == '^') {
      tokens.push_back({PatternToken::Kind::kSeparator, {}});
    } else {
      if (tokens.empty() || tokens.back().kind != PatternToken::Kind::kLiteral)
        tokens.push_back({PatternToken::Kind::kLiteral, {}});
      tokens.back().text += c;
    }
  }
  return tokens;
}

void ComputeAnchorHost(FilterRule& rule) {
  if (!rule.domain_anchor || rule.tokens.empty() ||
      rule.tokens.front().kind != PatternToken::Kind::kLiteral)
    return;
  const std::string& lit = rule.tokens.front().text;
  size_t n = 0;
  while (n < lit.size() && IsAnchorHostChar(lit[n]))
    ++n;
  rule.anchor_host = ToLowerAscii(std::string_view(lit).substr(0, n));
  if (rule.anchor_host.empty() || rule.anchor_host.front() == '.' ||
      rule.anchor_host.back() == '.' ||
      rule.anchor_host.find("..") != std::string::npos)
    return;
  if (n < lit.size()) {
    char next = lit[n];
    rule.anchor_host_complete = next == '/' || next == ':' || next == '?';
  } else {
    rule.anchor_host_complete =
        rule.tokens.size() > 1 &&
        rule.tokens[1].kind == PatternToken::Kind::kSeparator;
  }
}

enum class LineResult { kRule, kSkipped, kBlank };

LineResult ParseLine(std::string_view line, int line_no, FilterRule& rule) {
  line = TrimWhitespace(line);
  if (line.empty())
    return LineResult::kBlank;
  if (line.front() == '!')
    return LineResult::kSkipped;
  if (line.front() == '[' && line.back() == ']')
    return LineResult::kSkipped;
  if (line.find("##") != std::string_view::npos ||
      line.find("#@#") != std::string_view::npos ||
      line.find("#?#") != std::string_view::npos ||
      line.find("#$#") != std::string_view::npos)
    return LineResult::kSkipped;

  rule = FilterRule{};
  rule.raw = std::string(line);
  rule.source_line = line_no;
  std::string_view pattern = line;
  if (pattern.substr(0, 2) == "@@") {
    rule.exception = true;
    pattern.remove_prefix(2);
  }
  if (auto dollar = pattern.rfind('$'); dollar != std::string_view::npos) {
    std::string_view options = pattern.substr(dollar + 1);
    if (LooksLikeOptions(options)) {
      rule.options = std::string(options);
      pattern = pattern.substr(0, dollar);
      if (OptionsDisableRule(options))
        return LineResult::kSkipped;
    }
  }
  if (pattern.size() > 2 && pattern.front() == '/' && pattern.back() == '/')
    return LineResult::kSkipped;  // regex rules are not supported
  if (pattern.substr(0, 2) == "||") {
    rule.domain_anchor = true;
    pattern.remove_prefix(2);
  } else if (!pattern.empty() && pattern.front() == '|') {
    rule.start_anchor = true;
    pattern.remove_prefix(1);
  }
  if (!pattern.empty() && pattern.back() == '|') {
    rule.end_anchor = true;
    pattern.remove_suffix(1);
  }
  if (pattern.empty())
    return LineResult::kSkipped;
  rule.tokens = Tokenize(pattern);
  rule.kind = rule.exception       ? FilterRule::Kind::kException
              : rule.domain_anchor ? FilterRule::Kind::kDomainAnchor
                                   : FilterRule::Kind::kPlain;
  ComputeAnchorHost(rule);
  return LineResult::kRule;
}

// URL text prepared for matching: host lowercased, host span located.
struct PreparedUrl {
  std::string text;
  size_t host_begin = 0;
  size_t host_end = 0;
};

PreparedUrl Prepare(std::string_view url) {
  if (!ParseUrl(url))
    throw MalformedUrl("cannot match malformed URL: " + std::string(url));
  PreparedUrl out;
  out.text = std::string(TrimWhitespace(url));
  out.host_begin = out.text.find("://") + 3;
  if (out.host_begin < out.text.size() && out.text[out.host_begin] == '[') {
    out.host_end = out.text.find(']', out.host_begin) + 1;
  } else {
    out.host_end = out.text.find_first_of("/?#:", out.host_begin);
    if (out.host_end == std::string::npos)
      out.host_end = out.text.size();
  }
  for (size_t i = out.host_begin; i < out.host_end; ++i)
    out.text[i] = static_cast<char>(
        std::tolower(static_cast<unsigned char>(out.text[i])));
  return out;
}

bool MatchPrepared(const FilterRule& rule, const PreparedUrl& url) {
  const std::string& s = url.text;
  const size_t n = s.size();
  std::vector<char> cur(n + 1, 0);
  if (rule.domain_anchor) {
    cur[url.host_begin] = 1;
    for (size_t i = url.host_begin; i < url.host_end; ++i) {
      if (s[i] == '.')
        cur[i + 1] = 1;
    }
  } else if (rule.start_anchor) {
    cur[0] = 1;
  } else {
    std::fill(cur.begin(), cur.end(), 1);
  }

  std::vector<char> next(n + 1, 0);
  bool first_token = true;
  for (const PatternToken& token : rule.tokens) {
    std::fill(next.begin(), next.end(), 0);
    bool any = false;
    switch (token.kind) {
      case PatternToken::Kind::kLiteral: {
        std::string lit = token.text;
        if (first_token && rule.domain_anchor) {
          // Host comparison is case-insensitive.
          size_t k = 0;
          while (k < lit.size() && IsAnchorHostChar(lit[k])) {
            lit[k] = static_cast<char>(
                std::tolower(static_cast<unsigned char>(lit[k])));
            ++k;
          }
        }
        for (size_t p = 0; p + lit.size() <= n; ++p) {
          if (cur[p] && s.compare(p, lit.size(), lit) == 0) {
            next[p + lit.size()] = 1;
            any = true;
          }
        }
        break;
      }
      case PatternToken::Kind::kWildcard: {
        auto first = std::find(cur.begin(), cur.end(), 1);
        if (first != cur.end()) {
          std::fill(next.begin() + (first - cur.begin()), next.end(), 1);
          any = true;
        }
        break;
      }
      case PatternToken::Kind::kSeparator: {
        for (size_t p = 0; p <= n; ++p) {
          if (!cur[p])
            continue;
          if (p == n) {
            next[n] = 1;
            any = true;
          } else if (IsSeparator(s[p])) {
            next[p + 1] = 1;
            any = true;
          }
        }
        break;
      }
    }
    if (!any)
      return false;
    cur.swap(next);
    first_token = false;
  }
  if (rule.end_anchor)
    return cur[n] != 0;
  return std::find(cur.begin(), cur.end(), 1) != cur.end();
}

template <typename Visit>
void ForEachCandidate(const FilterSet& fs,
                      const PreparedUrl& url,
                      Visit&& visit) {
  std::string_view host(url.text.data() + url.host_begin,
                        url.host_end - url.host_begin);
  while (!host.empty()) {
    auto it = fs.domain_index.find(std::string(host));
    if (it != fs.domain_index.end()) {
      for (size_t idx : it->second) {
        if (fs.rules[idx].anchor_host_complete)
          visit(fs.rules[idx]);
      }
    }
    auto dot = host.find('.');
    if (dot == std::string_view::npos)
      break;
    host.remove_prefix(dot + 1);
  }
  for (size_t idx : fs.unindexed)
    visit(fs.rules[idx]);
}

}  // namespace

std::string FilterRule::Serialize() const {
  std::string out;
  if (exception)
    out += "@@";
  if (domain_anchor)
    out += "||";
  else if (start_anchor)
    out += "|";
  for (const PatternToken& t : tokens) {
    switch (t.kind) {
      case PatternToken::Kind::kLiteral:
        out += t.text;
        break;
      case PatternToken::Kind::kWildcard:
        out += '*';
        break;
      case PatternToken::Kind::kSeparator:
        out += '^';
        break;
    }
  }
  if (end_anchor)
    out += '|';
  if (!options.empty())
    out += "$" + options;
  return out;
}

FilterSet ParseFilterList(std::string_view text) {
  FilterSet fs;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    FilterRule rule;
    switch (ParseLine(line, line_no, rule)) {
      case LineResult::kBlank:
        break;
      case LineResult::kSkipped:
        ++fs.skipped_lines;
        break;
      case LineResult::kRule: {
        size_t idx = fs.rules.size();
        if (rule.domain_anchor)
          fs.domain_index[rule.anchor_host].push_back(idx);
        if (!rule.anchor_host_complete)
          fs.unindexed.push_back(idx);
        fs.rules.push_back(std::move(rule));
        break;
      }
    }
  }
  return fs;
}

bool RuleMatches(const FilterRule& rule, std::string_view url) {
  return MatchPrepared(rule, Prepare(url));
}

bool Matches(const FilterSet& fs, std::string_view url) {
  PreparedUrl prepared = Prepare(url);
  bool blocked = false;
  bool excepted = false;
  ForEachCandidate(fs, prepared, [&](const FilterRule& rule) {
    if (rule.exception ? excepted : blocked)
      return;
    if (MatchPrepared(rule, prepared))
      (rule.exception ? excepted : blocked) = true;
  });
  return blocked && !excepted;
}

bool MatchesLinear(const FilterSet& fs, std::string_view url) {
  PreparedUrl prepared = Prepare(url);
  bool blocked = false;
  bool excepted = false;
  for (const FilterRule& rule : fs.rules) {
    if (MatchPrepared(rule, prepared))
      (rule.exception ? excepted : blocked) = true;
  }
  return blocked && !excepted;
}

std::set<std::string> ClassifyHosts(const FilterSet& fs,
                                    std::span<const std::string> request_urls) {
  std::set<std::string> hosts;
  for (const std::string& url : request_urls) {
    auto parts = ParseUrl(url);
    if (!parts)
      continue;
    if (hosts.count(parts->host))
      continue;
    if (Matches(fs, url))
      hosts.insert(parts->host);
  }
  return hosts;
}

}  // namespace sitebench
