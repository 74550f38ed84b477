#include "sitebench/site_scanner.h"

#include <fstream>
#include <sstream>

#include "sitebench/dns_scanner.h"
#include "sitebench/dns_wire.h"
#include "sitebench/http_fetch.h"
#include "sitebench/leak_probe.h"
#include "sitebench/ranking.h"
#include "sitebench/tls_scanner.h"
#include "sitebench/url.h"

namespace sitebench {

namespace {

std::string ModuleError(std::string_view module, std::string_view what) {
  return std::string(module) + ": " + std::string(what);
}

}  // namespace

std::optional<Endpoint> NameserverFromResolvConf(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::string key, value;
    if (words >> key >> value && key == "nameserver") {
      if (value.find(':') != std::string::npos && value.front() != '[')
        value = "[" + value + "]";
      return Endpoint::Parse(value, 53);
    }
  }
  return std::nullopt;
}

std::optional<Endpoint> SystemDnsServer() {
  std::ifstream in("/etc/resolv.conf");
  if (!in)
    return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  return NameserverFromResolvConf(buf.str());
}

SiteScanOutput ScanSite(std::string_view url, const ScanContext& ctx) {
  auto parts = ParseUrl(url);
  if (!parts)
    throw MalformedUrl("cannot scan malformed URL: " + std::string(url));
  const std::string host = parts->host;
  SiteScanOutput out;
  ScanFacts& facts = out.facts;

  if (!IsIpLiteral(host)) {
    dns::DnsClient client(ctx.dns_server, ctx.net.timeout);
    facts.dns = ResolveDns(host, client, ctx.signatures.public_suffixes);
    if (facts.dns->status != DnsStatus::kOk)
      out.module_errors.push_back(
          ModuleError("dns", DnsStatusName(facts.dns->status)));
  }

  HttpFetcher fetcher(ctx.net);
  PageBundle bundle;
  ContentScanOptions content_options = ctx.content;
  content_options.limits.timeout = ctx.net.timeout;
  FetchError content_error =
      FetchSite(parts->Serialize(), fetcher, content_options, &bundle);
  std::string leak_base = parts->Origin();
  if (content_error == FetchError::kNone) {
    facts.content =
        ExtractContentFacts(bundle, ctx.filters, host, ctx.signatures);
    if (auto final_parts = ParseUrl(bundle.final_url))
      leak_base = final_parts->Origin();
    facts.leaks = ProbeLeaks(leak_base, fetcher, ctx.net.timeout);
  } else {
    out.module_errors.push_back(
        ModuleError("content", FetchErrorName(content_error)));
    if (content_error != FetchError::kConnectionFailed &&
        content_error != FetchError::kTimeout)
      facts.leaks = ProbeLeaks(leak_base, fetcher, ctx.net.timeout);
    else
      out.module_errors.push_back(ModuleError("leaks", "site unreachable"));
  }

  NetError tls_error = NetError::kNone;
  TlsFacts tls = ScanWebTls(host, ctx.net, &tls_error);
  if (tls_error == NetError::kResolveFailed) {
    out.module_errors.push_back(ModuleError("tls", NetErrorName(tls_error)));
  } else {
    facts.tls = tls;
    if (tls_error != NetError::kNone)
      out.module_errors.push_back(ModuleError("tls", NetErrorName(tls_error)));
  }

  if (facts.dns && facts.dns->status != DnsStatus::kTimeout) {
    NetError mail_error = NetError::kNone;
    facts.mail = ScanMailTls(facts.dns->PrimaryMx(), ctx.net, &mail_error);
    if (mail_error != NetError::kNone)
      out.module_errors.push_back(
          ModuleError("mail", NetErrorName(mail_error)));
  } else {
    out.module_errors.push_back(ModuleError("mail", "no DNS facts"));
  }

  std::vector<GeoQuery> queries;
  std::vector<std::string> web_ips =
      facts.dns ? facts.dns->a_records : ctx.net.resolver->Resolve(host);
  for (const std::string& ip : web_ips)
    queries.push_back({ServerRole::kWeb, host, ip});
  if (facts.dns) {
    for (const MxRecord& mx : facts.dns->mx_records) {
      for (const std::string& ip : ctx.net.resolver->Resolve(mx.host))
        queries.push_back({ServerRole::kMail, mx.host, ip});
    }
    for (const std::string& ns : facts.dns->ns_records) {
      for (const std::string& ip : ctx.net.resolver->Resolve(ns))
        queries.push_back({ServerRole::kNs, ns, ip});
    }
  }
  if (!queries.empty())
    facts.geo = Geolocate(queries, ctx.geodb);
  else
    out.module_errors.push_back(ModuleError("geo", "no addresses"));

  out.reachable =
      facts.content.has_value() || (facts.tls && facts.tls->https_offered);
  out.results = EvaluateChecks(facts, ctx.catalog);
  return out;
}

}  // namespace sitebench
