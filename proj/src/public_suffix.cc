#include "sitebench/public_suffix.h"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "sitebench/url.h"

namespace sitebench {

namespace {

std::vector<std::string_view> Labels(std::string_view host) {
  std::vector<std::string_view> labels;
  while (true) {
    auto dot = host.find('.');
    labels.push_back(host.substr(0, dot));
    if (dot == std::string_view::npos)
      break;
    host.remove_prefix(dot + 1);
  }
  return labels;
}

std::string Join(const std::vector<std::string_view>& labels, size_t from) {
  std::string out;
  for (size_t i = from; i < labels.size(); ++i) {
    if (!out.empty())
      out += '.';
    out += labels[i];
  }
  return out;
}

}  // namespace

PublicSuffixList PublicSuffixList::Parse(std::string_view text) {
  PublicSuffixList psl;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    std::string_view line = TrimWhitespace(raw);
    if (auto space = line.find_first_of(" \t"); space != std::string_view::npos)
      line = line.substr(0, space);
    if (line.empty() || line.substr(0, 2) == "//")
      continue;
    std::string rule = ToLowerAscii(line);
    if (rule.front() == '!')
      psl.exceptions_.insert(rule.substr(1));
    else if (rule.substr(0, 2) == "*.")
      psl.wildcards_.insert(rule.substr(2));
    else
      psl.rules_.insert(rule);
  }
  return psl;
}

PublicSuffixList PublicSuffixList::LoadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open public suffix list " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

std::string PublicSuffixList::PublicSuffix(std::string_view host) const {
  std::string lowered = ToLowerAscii(host);
  auto labels = Labels(lowered);
  // Walk from the longest candidate to the shortest; the first hit is the
  // longest matching rule.
  for (size_t i = 0; i < labels.size(); ++i) {
    std::string candidate = Join(labels, i);
    if (exceptions_.count(candidate))
      return Join(labels, i + 1);
    if (rules_.count(candidate))
      return candidate;
    if (i + 1 < labels.size() && wildcards_.count(Join(labels, i + 1)))
      return candidate;
  }
  return std::string(labels.back());
}

std::string PublicSuffixList::RegistrableDomain(std::string_view host) const {
  std::string lowered = ToLowerAscii(host);
  if (IsIpLiteral(lowered))
    return lowered;
  std::string suffix = PublicSuffix(lowered);
  if (suffix.size() >= lowered.size())
    return lowered;
  std::string_view rest(lowered.data(), lowered.size() - suffix.size() - 1);
  auto dot = rest.rfind('.');
  std::string_view label =
      dot == std::string_view::npos ? rest : rest.substr(dot + 1);
  return std::string(label) + "." + suffix;
}

}  // namespace sitebench
