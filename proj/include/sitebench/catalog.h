#ifndef SITEBENCH_CATALOG_H_
#define SITEBENCH_CATALOG_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sitebench/model.h"

namespace sitebench {

namespace checks {
// NoTrack
inline constexpr std::string_view kThirdPartyTrackers = "third_party_trackers";
inline constexpr std::string_view kThirdPartyHosts = "third_party_hosts";
inline constexpr std::string_view kCookiesThirdParty = "cookies_third_party";
inline constexpr std::string_view kFingerprinting = "fingerprinting";
inline constexpr std::string_view kCdnUsage = "cdn_usage";
inline constexpr std::string_view kServerLocation = "server_location";
// Attacks
inline constexpr std::string_view kHeaderCsp = "header_content_security_policy";
inline constexpr std::string_view kHeaderXssProtection =
    "header_x_xss_protection";
inline constexpr std::string_view kHeaderFrameOptions =
    "header_x_frame_options";
inline constexpr std::string_view kHeaderContentTypeOptions =
    "header_x_content_type_options";
inline constexpr std::string_view kHeaderReferrerPolicy =
    "header_referrer_policy";
inline constexpr std::string_view kLeakServerStatus = "leak_server_status";
inline constexpr std::string_view kLeakTestScripts = "leak_test_scripts";
inline constexpr std::string_view kLeakGit = "leak_git_repository";
inline constexpr std::string_view kLeakSvn = "leak_svn_repository";
inline constexpr std::string_view kLeakCoreDump = "leak_core_dump";
inline constexpr std::string_view kDnssec = "dnssec";
inline constexpr std::string_view kServerVersionBanner =
    "server_version_banner";
inline constexpr std::string_view kCmsGenerator = "cms_generator_version";
inline constexpr std::string_view kOutdatedLibs = "outdated_libs";
// EncWeb
inline constexpr std::string_view kHttpsOffered = "https_offered";
inline constexpr std::string_view kHttpsRedirect = "https_redirect";
inline constexpr std::string_view kCertValid = "cert_valid";
inline constexpr std::string_view kHsts = "hsts";
inline constexpr std::string_view kSslv3Disabled = "sslv3_disabled";
inline constexpr std::string_view kLegacyTlsDisabled = "legacy_tls_disabled";
inline constexpr std::string_view kModernTlsOffered = "modern_tls_offered";
inline constexpr std::string_view kMixedContent = "mixed_content";
// EncMail
inline constexpr std::string_view kMailStarttls = "mail_starttls";
inline constexpr std::string_view kMailCertValid = "mail_cert_valid";
inline constexpr std::string_view kMailSslv3Disabled = "mail_sslv3_disabled";
inline constexpr std::string_view kMailLegacyTlsDisabled =
    "mail_legacy_tls_disabled";
inline constexpr std::string_view kSpf = "spf";
inline constexpr std::string_view kDmarc = "dmarc";
}  // namespace checks

struct CatalogEntry {
  std::string id;
  CheckGroup group = CheckGroup::kNoTrack;
  bool critical = false;
  std::string title;
  // Pass criterion, shown next to results.
  std::string criterion;
};

class CatalogError : public std::runtime_error {
 public:
  explicit CatalogError(const std::string& what) : std::runtime_error(what) {}
};

// The static list of checks. Every check the evaluator emits appears exactly
// once, mapped to exactly one group.
class CheckCatalog {
 public:
  static const CheckCatalog& Default();

  // Applies a config file (`check_id <TAB> group <TAB> critical|normal`,
  // '#' comments) on top of the default catalog. Only known check ids may be
  // listed; each group must keep at least one check. Throws CatalogError.
  static CheckCatalog Parse(std::string_view text);
  static CheckCatalog LoadFile(const std::string& path);

  const std::vector<CatalogEntry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  const CatalogEntry* Find(std::string_view id) const;
  std::vector<const CatalogEntry*> InGroup(CheckGroup group) const;

  // Renders the config-file form.
  std::string Serialize() const;

 private:
  std::vector<CatalogEntry> entries_;
};

}  // namespace sitebench

#endif  // SITEBENCH_CATALOG_H_
