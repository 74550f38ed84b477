#include "sitebench/url.h"

#include <algorithm>
#include <cctype>

#include <arpa/inet.h>

namespace sitebench {

namespace {

bool IsSchemeChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
         c == '.';
}

bool IsHostChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' ||
         c == '_';
}

int DefaultPort(std::string_view scheme) {
  return scheme == "https" ? 443 : 80;
}

bool ValidHostName(std::string_view host) {
  if (host.empty() || host.size() > 253)
    return false;
  if (!std::all_of(host.begin(), host.end(), IsHostChar))
    return false;
  // No empty labels.
  if (host.front() == '.' || host.back() == '.' ||
      host.find("..") != std::string_view::npos)
    return false;
  return true;
}

// Removes "." and ".." segments from an absolute path.
std::string RemoveDotSegments(std::string_view path) {
  std::string query;
  if (auto q = path.find('?'); q != std::string_view::npos) {
    query = std::string(path.substr(q));
    path = path.substr(0, q);
  }
  std::string out;
  size_t i = 0;
  while (i < path.size()) {
    size_t next = path.find('/', i + 1);
    std::string_view seg = path.substr(
        i, next == std::string_view::npos ? std::string_view::npos : next - i);
    if (seg == "/..") {
      auto cut = out.rfind('/');
      out.erase(cut == std::string::npos ? 0 : cut);
      if (next == std::string_view::npos)
        out += '/';
    } else if (seg == "/.") {
      if (next == std::string_view::npos)
        out += '/';
    } else {
      out += seg;
    }
    if (next == std::string_view::npos)
      break;
    i = next;
  }
  if (out.empty())
    out = "/";
  return out + query;
}

}  // namespace

std::string ToLowerAscii(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view TrimWhitespace(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool IsIpLiteral(std::string_view host) {
  std::string h(host);
  if (h.size() > 2 && h.front() == '[' && h.back() == ']')
    h = h.substr(1, h.size() - 2);
  unsigned char buf[16];
  return inet_pton(AF_INET, h.c_str(), buf) == 1 ||
         inet_pton(AF_INET6, h.c_str(), buf) == 1;
}

int UrlParts::EffectivePort() const {
  return port == -1 ? DefaultPort(scheme) : port;
}

std::string UrlParts::Origin() const {
  std::string out = scheme + "://" + host;
  if (port != -1)
    out += ":" + std::to_string(port);
  return out;
}

std::string UrlParts::Serialize() const {
  return Origin() + path;
}

std::optional<UrlParts> ParseUrl(std::string_view url) {
  url = TrimWhitespace(url);
  auto sep = url.find("://");
  if (sep == std::string_view::npos || sep == 0)
    return std::nullopt;
  std::string_view scheme = url.substr(0, sep);
  if (!std::isalpha(static_cast<unsigned char>(scheme.front())) ||
      !std::all_of(scheme.begin(), scheme.end(), IsSchemeChar))
    return std::nullopt;
  UrlParts parts;
  parts.scheme = ToLowerAscii(scheme);
  if (parts.scheme != "http" && parts.scheme != "https")
    return std::nullopt;

  std::string_view rest = url.substr(sep + 3);
  if (auto hash = rest.find('#'); hash != std::string_view::npos)
    rest = rest.substr(0, hash);
  for (char c : rest) {
    if (std::isspace(static_cast<unsigned char>(c)) ||
        std::iscntrl(static_cast<unsigned char>(c)))
      return std::nullopt;
  }
  size_t auth_end = rest.find_first_of("/?");
  std::string_view authority = rest.substr(0, auth_end);
  std::string_view path =
      auth_end == std::string_view::npos ? "" : rest.substr(auth_end);
  if (authority.find('@') != std::string_view::npos)
    return std::nullopt;

  std::string_view host;
  std::string_view port;
  bool has_port = false;
  if (!authority.empty() && authority.front() == '[') {
    auto close = authority.find(']');
    if (close == std::string_view::npos)
      return std::nullopt;
    host = authority.substr(0, close + 1);
    std::string_view tail = authority.substr(close + 1);
    if (!tail.empty()) {
      if (tail.front() != ':')
        return std::nullopt;
      port = tail.substr(1);
      has_port = true;
    }
    if (!IsIpLiteral(host))
      return std::nullopt;
  } else {
    auto colon = authority.find(':');
    host = authority.substr(0, colon);
    if (colon != std::string_view::npos) {
      port = authority.substr(colon + 1);
      has_port = true;
    }
    if (!host.empty() && host.back() == '.')
      host.remove_suffix(1);
    if (!ValidHostName(host))
      return std::nullopt;
  }
  parts.host = ToLowerAscii(host);

  if (has_port) {
    if (port.empty() || port.size() > 5 ||
        !std::all_of(port.begin(), port.end(),
                     [](char c) { return c >= '0' && c <= '9'; }))
      return std::nullopt;
    int value = std::stoi(std::string(port));
    if (value < 1 || value > 65535)
      return std::nullopt;
    parts.port = value == DefaultPort(parts.scheme) ? -1 : value;
  }

  if (path.empty())
    parts.path = "/";
  else if (path.front() == '?')
    parts.path = "/" + std::string(path);
  else
    parts.path = std::string(path);
  return parts;
}

std::string NormalizeUrl(std::string_view raw) {
  std::string_view trimmed = TrimWhitespace(raw);
  if (trimmed.empty())
    throw MalformedUrl("empty URL");
  std::string candidate;
  auto scheme_sep = trimmed.find("://");
  if (scheme_sep != std::string_view::npos && scheme_sep <= trimmed.find('/'))
    candidate = std::string(trimmed);
  else if (trimmed.substr(0, 2) == "//")
    candidate = "https:" + std::string(trimmed);
  else
    candidate = "https://" + std::string(trimmed);
  auto parts = ParseUrl(candidate);
  if (!parts)
    throw MalformedUrl("cannot parse URL: " + std::string(trimmed));
  return parts->Serialize();
}

std::string HostOf(std::string_view url) {
  auto parts = ParseUrl(url);
  if (!parts)
    throw MalformedUrl("cannot parse URL: " + std::string(url));
  return parts->host;
}

std::optional<std::string> ResolveReference(const UrlParts& base,
                                            std::string_view ref) {
  ref = TrimWhitespace(ref);
  if (ref.empty() || ref.front() == '#')
    return std::nullopt;
  auto colon = ref.find(':');
  auto first_delim = ref.find_first_of("/?#");
  if (colon != std::string_view::npos && colon < first_delim) {
    // Has its own scheme.
    auto parts = ParseUrl(ref);
    if (!parts)
      return std::nullopt;
    return parts->Serialize();
  }
  if (ref.substr(0, 2) == "//") {
    auto parts = ParseUrl(base.scheme + ":" + std::string(ref));
    if (!parts)
      return std::nullopt;
    return parts->Serialize();
  }
  std::string path;
  if (ref.front() == '/') {
    path = std::string(ref);
  } else if (ref.front() == '?') {
    std::string base_path = base.path.substr(0, base.path.find('?'));
    path = base_path + std::string(ref);
  } else {
    std::string base_path = base.path.substr(0, base.path.find('?'));
    path = base_path.substr(0, base_path.rfind('/') + 1) + std::string(ref);
  }
  if (auto hash = path.find('#'); hash != std::string::npos)
    path.erase(hash);
  UrlParts out = base;
  out.path = RemoveDotSegments(path);
  auto reparsed = ParseUrl(out.Serialize());
  if (!reparsed)
    return std::nullopt;
  return reparsed->Serialize();
}

}  // namespace sitebench
