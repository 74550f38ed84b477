#include "sitebench/http_fetch.h"

#include <chrono>

#include <httplib.h>

#include "sitebench/url.h"

namespace sitebench {

std::string_view FetchErrorName(FetchError e) {
  switch (e) {
    case FetchError::kNone:
      return "None";
    case FetchError::kTimeout:
      return "Timeout";
    case FetchError::kTooManyRedirects:
      return "TooManyRedirects";
    case FetchError::kConnectionFailed:
      return "ConnectionFailed";
    case FetchError::kBodyTooLarge:
      return "BodyTooLarge";
    case FetchError::kMalformedUrl:
      return "MalformedUrl";
  }
  return "Unknown";
}

std::optional<std::string> HttpResponse::Header(std::string_view name) const {
  std::string lower = ToLowerAscii(name);
  for (const auto& [k, v] : headers) {
    if (k == lower)
      return v;
  }
  return std::nullopt;
}

std::vector<std::string> HttpResponse::Headers(std::string_view name) const {
  std::string lower = ToLowerAscii(name);
  std::vector<std::string> out;
  for (const auto& [k, v] : headers) {
    if (k == lower)
      out.push_back(v);
  }
  return out;
}

FetchError HttpFetcher::GetOnce(std::string_view url,
                                const FetchLimits& limits,
                                HttpResponse* out) const {
  auto parts = ParseUrl(url);
  if (!parts)
    return FetchError::kMalformedUrl;
  out->url = parts->Serialize();
  std::vector<std::string> ips = options_.resolver->Resolve(parts->host);
  if (ips.empty())
    return FetchError::kConnectionFailed;
  bool tls = parts->scheme == "https";
  int port = parts->port >= 0 ? parts->port
             : tls            ? options_.https_port
                              : options_.http_port;
  std::string origin =
      parts->scheme + "://" + parts->host + ":" + std::to_string(port);
  httplib::Client cli(origin);
  if (!IsIpLiteral(parts->host))
    cli.set_hostname_addr_map({{parts->host, ips.front()}});
  cli.enable_server_certificate_verification(false);
  if (SSL_CTX* ctx = tls ? cli.ssl_context() : nullptr) {
    // Legacy servers must still be readable.
    SSL_CTX_set_security_level(ctx, 0);
    SSL_CTX_set_cipher_list(ctx, "ALL:@SECLEVEL=0");
    SSL_CTX_set_min_proto_version(ctx, TLS1_VERSION);
  }
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(limits.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
                   limits.timeout - secs)
                   .count();
  cli.set_connection_timeout(secs.count(), usecs);
  cli.set_read_timeout(secs.count(), usecs);
  cli.set_write_timeout(secs.count(), usecs);
  cli.set_keep_alive(false);

  httplib::Headers headers = {{"User-Agent", options_.user_agent},
                              {"Accept", "*/*"}};
  bool too_large = false;
  auto started = std::chrono::steady_clock::now();
  auto res = cli.Get(
      parts->path, headers,
      [&](const httplib::Response& r) {
        out->status = r.status;
        for (const auto& [k, v] : r.headers)
          out->headers.emplace_back(ToLowerAscii(k), v);
        return true;
      },
      [&](const char* data, size_t len) {
        if (out->body.size() + len > limits.max_body) {
          if (limits.truncate_body) {
            out->body.append(data, limits.max_body - out->body.size());
            out->truncated = true;
          } else {
            too_large = true;
          }
          return false;
        }
        out->body.append(data, len);
        return true;
      });
  if (res)
    return FetchError::kNone;
  if (out->truncated)
    return FetchError::kNone;
  if (too_large)
    return FetchError::kBodyTooLarge;
  switch (res.error()) {
    case httplib::Error::ConnectionTimeout:
      return FetchError::kTimeout;
    case httplib::Error::Read:
    case httplib::Error::Write:
      if (std::chrono::steady_clock::now() - started >= limits.timeout)
        return FetchError::kTimeout;
      return FetchError::kConnectionFailed;
    default:
      return FetchError::kConnectionFailed;
  }
}

FetchResult HttpFetcher::Get(std::string_view url,
                             const FetchLimits& limits) const {
  FetchResult result;
  std::string current(url);
  for (int hop = 0;; ++hop) {
    HttpResponse response;
    result.error = GetOnce(current, limits, &response);
    if (result.error != FetchError::kNone)
      return result;
    auto location = response.Header("location");
    bool redirect = response.status >= 300 && response.status < 400 &&
                    response.status != 304 && location;
    if (!redirect || limits.max_redirects == 0) {
      result.response = std::move(response);
      return result;
    }
    if (hop >= limits.max_redirects) {
      result.error = FetchError::kTooManyRedirects;
      return result;
    }
    auto target = ResolveReference(*ParseUrl(response.url), *location);
    if (!target) {
      result.response = std::move(response);
      return result;
    }
    result.redirect_chain.push_back(response.url);
    result.redirect_responses.push_back(response);
    current = *target;
  }
}

}  // namespace sitebench
