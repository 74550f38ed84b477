#ifndef SITEBENCH_SITE_SCANNER_H_
#define SITEBENCH_SITE_SCANNER_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sitebench/catalog.h"
#include "sitebench/content_scanner.h"
#include "sitebench/filter_engine.h"
#include "sitebench/geoip.h"
#include "sitebench/model.h"
#include "sitebench/net.h"
#include "sitebench/signatures.h"

namespace sitebench {

// Everything a scan needs besides the target URL. Shared read-only between
// concurrent scans.
struct ScanContext {
  NetOptions net;
  // Validating resolver queried for DNS facts.
  Endpoint dns_server{"127.0.0.53", 53};
  FilterSet filters;
  SignatureSet signatures;
  GeoDb geodb;
  CheckCatalog catalog = CheckCatalog::Default();
  ContentScanOptions content;
};

// First nameserver listed in |resolv_conf|; nullopt when there is none.
std::optional<Endpoint> NameserverFromResolvConf(std::string_view resolv_conf);
// Same for /etc/resolv.conf.
std::optional<Endpoint> SystemDnsServer();

struct SiteScanOutput {
  ScanFacts facts;
  std::vector<std::string> module_errors;
  std::vector<CheckResult> results;
  // The landing page loaded or HTTPS answered.
  bool reachable = false;
};

// Runs DNS, content, leak, web TLS, mail TLS and geolocation for |url| and
// evaluates the catalog. Module failures leave their bundle absent (or
// partially unknown) and are listed in module_errors. Throws MalformedUrl.
SiteScanOutput ScanSite(std::string_view url, const ScanContext& context);

}  // namespace sitebench

#endif  // SITEBENCH_SITE_SCANNER_H_
