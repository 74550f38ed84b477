#ifndef SITEBENCH_CONTENT_SCANNER_H_
#define SITEBENCH_CONTENT_SCANNER_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sitebench/facts.h"
#include "sitebench/filter_engine.h"
#include "sitebench/http_fetch.h"
#include "sitebench/signatures.h"
#include "sitebench/url.h"

namespace sitebench {

struct ObservedCookie {
  std::string name;
  // Domain attribute when given, otherwise the host that set it.
  std::string domain;
  bool operator==(const ObservedCookie&) const = default;
};

struct ScriptSource {
  std::string url;  // empty for inline scripts
  std::string body;
};

// Everything fetch_site collects for one landing page.
struct PageBundle {
  std::string final_url;
  int status = 0;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  std::vector<std::string> redirect_chain;
  std::vector<std::string> subresources;
  std::vector<ObservedCookie> cookies;
  std::vector<ScriptSource> scripts;
};

struct ContentScanOptions {
  FetchLimits limits;
  // External scripts fetched for fingerprint and banner analysis.
  int max_scripts = 32;
  size_t max_script_body = 1024 * 1024;
};

// Absolute http(s) URLs referenced by script/img/link/iframe src or href
// attributes and by CSS url(...) in the document, in document order,
// without duplicates.
std::vector<std::string> ExtractSubresources(std::string_view html,
                                             const UrlParts& base);

// Decodes the handful of character references that appear in URLs.
std::string DecodeEntities(std::string_view s);

// Bodies of <script> elements without a src attribute.
std::vector<std::string> ExtractInlineScripts(std::string_view html);

// Content of <meta name="generator">.
std::optional<std::string> ExtractGenerator(std::string_view html);

// Cookie names assigned through document.cookie string literals.
std::vector<ObservedCookie> ScriptCookies(std::string_view script,
                                          std::string_view page_host);

// Parses one Set-Cookie value sent by |host|.
std::optional<ObservedCookie> ParseSetCookie(std::string_view value,
                                             std::string_view host);

// Fetches |url| and its external scripts. Returns the fetch error of the
// landing page; script fetch failures are ignored.
FetchError FetchSite(std::string_view url,
                     const HttpFetcher& fetcher,
                     const ContentScanOptions& options,
                     PageBundle* out);

ContentFacts ExtractContentFacts(const PageBundle& bundle,
                                 const FilterSet& filters,
                                 std::string_view site_host,
                                 const SignatureSet& signatures);

}  // namespace sitebench

#endif  // SITEBENCH_CONTENT_SCANNER_H_
