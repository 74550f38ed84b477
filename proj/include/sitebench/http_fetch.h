#ifndef SITEBENCH_HTTP_FETCH_H_
#define SITEBENCH_HTTP_FETCH_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sitebench/net.h"

namespace sitebench {

struct FetchLimits {
  int max_redirects = 10;
  Millis timeout{10000};
  size_t max_body = 5 * 1024 * 1024;
  // When set, bodies over max_body are cut instead of failing the fetch.
  bool truncate_body = false;
};

enum class FetchError {
  kNone,
  kTimeout,
  kTooManyRedirects,
  kConnectionFailed,
  kBodyTooLarge,
  kMalformedUrl,
};

std::string_view FetchErrorName(FetchError e);

struct HttpResponse {
  std::string url;
  int status = 0;
  // Names lowercased, in arrival order; repeated headers kept.
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  bool truncated = false;

  std::optional<std::string> Header(std::string_view name) const;
  std::vector<std::string> Headers(std::string_view name) const;
};

struct FetchResult {
  FetchError error = FetchError::kNone;
  // Final response (valid when error is kNone).
  HttpResponse response;
  // URLs that answered with a redirect, in order.
  std::vector<std::string> redirect_chain;
  // The redirect responses themselves (for their Set-Cookie headers).
  std::vector<HttpResponse> redirect_responses;
};

// GET client over cpp-httplib. Host names go through NetOptions::resolver;
// the scheme-default ports are replaced by the configured overrides.
// Certificates are not validated here: content analysis must still see
// sites with broken TLS.
class HttpFetcher {
 public:
  explicit HttpFetcher(NetOptions options) : options_(std::move(options)) {}

  // Follows up to limits.max_redirects redirects (0 disables following).
  FetchResult Get(std::string_view url, const FetchLimits& limits) const;

  const NetOptions& options() const { return options_; }

 private:
  FetchError GetOnce(std::string_view url,
                     const FetchLimits& limits,
                     HttpResponse* out) const;

  NetOptions options_;
};

}  // namespace sitebench

#endif  // SITEBENCH_HTTP_FETCH_H_
