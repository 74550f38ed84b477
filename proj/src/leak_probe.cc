#include "sitebench/leak_probe.h"

#include <cctype>

#include "sitebench/url.h"

namespace sitebench {

namespace {

bool Contains(std::string_view body, std::string_view needle) {
  return body.find(needle) != std::string_view::npos;
}

// Working-copy entries file: a bare format number (pre-1.4 plain format and
// the 1.7+ stub) or the XML wc-entries document.
std::optional<std::string> SniffSvnEntries(std::string_view body) {
  if (Contains(body.substr(0, 512), "<wc-entries"))
    return "svn wc-entries (xml)";
  auto nl = body.find('\n');
  if (nl == std::string_view::npos || nl == 0 || nl > 2)
    return std::nullopt;
  std::string_view first = body.substr(0, nl);
  for (char c : first) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return std::nullopt;
  }
  int format = std::stoi(std::string(first));
  if (format < 4 || format > 12)
    return std::nullopt;
  std::string_view rest = body.substr(nl + 1);
  if (!rest.empty() && rest.substr(0, 1) != "\n" && rest.substr(0, 1) != "\f")
    return std::nullopt;
  return "svn entries format " + std::string(first);
}

std::optional<std::string> SniffCore(std::string_view body) {
  if (body.size() >= 18 && body.substr(0, 4) ==
                               "\x7f"
                               "ELF") {
    // e_type at offset 16, byte order from EI_DATA.
    bool little = body[5] == 1;
    unsigned lo = static_cast<unsigned char>(body[little ? 16 : 17]);
    unsigned hi = static_cast<unsigned char>(body[little ? 17 : 16]);
    return (hi << 8 | lo) == 4 ? "ELF core file" : "ELF object";
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> DetectLeakSignature(std::string_view path,
                                               std::string_view body) {
  if (path == "/server-status/") {
    if (Contains(body, "Apache Server Status"))
      return "Apache Server Status";
  } else if (path == "/server-info/") {
    if (Contains(body, "Apache Server Information"))
      return "Apache Server Information";
  } else if (path == "/test.php" || path == "/phpinfo.php") {
    if (Contains(body, "phpinfo()"))
      return "phpinfo()";
    if (Contains(body, "PHP Version"))
      return "PHP Version";
  } else if (path == "/.git/HEAD") {
    if (body.substr(0, 10) == "ref: refs/")
      return "ref: refs/";
  } else if (path == "/.svn/entries") {
    return SniffSvnEntries(body);
  } else if (path == "/core") {
    return SniffCore(body);
  }
  return std::nullopt;
}

LeakFacts ProbeLeaks(std::string_view base_url,
                     const HttpFetcher& fetcher,
                     Millis timeout) {
  LeakFacts facts;
  auto base = ParseUrl(base_url);
  FetchLimits limits;
  limits.max_redirects = 0;
  limits.timeout = timeout;
  limits.max_body = kLeakBodyCap;
  limits.truncate_body = true;
  for (std::string_view path : kLeakPaths) {
    LeakFinding finding;
    finding.path = std::string(path);
    if (base) {
      FetchResult r = fetcher.Get(base->Origin() + std::string(path), limits);
      if (r.error == FetchError::kNone) {
        finding.http_status = r.response.status;
        if (r.response.status >= 200 && r.response.status < 300) {
          finding.signature = DetectLeakSignature(path, r.response.body);
          finding.detected = finding.signature.has_value();
        }
      }
    }
    facts.findings.push_back(std::move(finding));
  }
  return facts;
}

}  // namespace sitebench
