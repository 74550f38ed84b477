#ifndef SITEBENCH_URL_H_
#define SITEBENCH_URL_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sitebench {

class MalformedUrl : public std::runtime_error {
 public:
  explicit MalformedUrl(const std::string& what) : std::runtime_error(what) {}
};

// Components of an absolute http(s) URL. |port| is -1 when the URL relies on
// the scheme default. |path| starts with '/' and includes the query string.
struct UrlParts {
  std::string scheme;
  std::string host;
  int port = -1;
  std::string path = "/";

  int EffectivePort() const;
  std::string Origin() const;
  std::string Serialize() const;
};

// Parses an absolute http(s) URL. Host is lowercased, fragment dropped,
// default port folded to -1. Returns nullopt on anything unparseable.
std::optional<UrlParts> ParseUrl(std::string_view url);

// Canonical site URL: scheme defaults to https when absent, host lowercased,
// default port stripped, fragment removed, path preserved ("/" when empty).
// Throws MalformedUrl.
std::string NormalizeUrl(std::string_view raw);

// Host of an absolute URL, lowercased. Throws MalformedUrl.
std::string HostOf(std::string_view url);

// Resolves |ref| (absolute, scheme-relative, root-relative or relative)
// against |base|. Returns nullopt for non-http(s) targets such as data: or
// javascript: references.
std::optional<std::string> ResolveReference(const UrlParts& base,
                                            std::string_view ref);

bool IsIpLiteral(std::string_view host);

std::string ToLowerAscii(std::string_view s);
std::string_view TrimWhitespace(std::string_view s);

}  // namespace sitebench

#endif  // SITEBENCH_URL_H_
