#include "sitebench/catalog.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sitebench/url.h"

namespace sitebench {

namespace {

using G = CheckGroup;

std::vector<CatalogEntry> DefaultEntries() {
  using namespace checks;
  auto e = [](std::string_view id, G group, bool critical,
              std::string_view title, std::string_view criterion) {
    return CatalogEntry{std::string(id), group, critical, std::string(title),
                        std::string(criterion)};
  };
  return {
      e(kThirdPartyTrackers, G::kNoTrack, true, "No embedded trackers",
        "No third-party request matches the tracker filter list."),
      e(kThirdPartyHosts, G::kNoTrack, false, "No third-party requests",
        "The landing page embeds no resources from other registrable "
        "domains."),
      e(kCookiesThirdParty, G::kNoTrack, false, "No third-party cookies",
        "No cookie is set by a host outside the site's registrable domain."),
      e(kFingerprinting, G::kNoTrack, false, "No fingerprinting code",
        "No script matches a known browser-fingerprinting signature."),
      e(kCdnUsage, G::kNoTrack, false, "Not served through a CDN",
        "Neither the site nor its resources are delivered by a known "
        "content distribution network."),
      e(kServerLocation, G::kNoTrack, false, "Servers in one jurisdiction",
        "Web, mail and name servers geolocate to a single country."),

      e(kHeaderCsp, G::kAttacks, false, "Content-Security-Policy set",
        "The response carries a Content-Security-Policy header."),
      e(kHeaderXssProtection, G::kAttacks, false, "X-XSS-Protection set",
        "The response carries X-XSS-Protection with filtering enabled."),
      e(kHeaderFrameOptions, G::kAttacks, false, "X-Frame-Options set",
        "The response carries X-Frame-Options DENY or SAMEORIGIN."),
      e(kHeaderContentTypeOptions, G::kAttacks, false,
        "X-Content-Type-Options set",
        "The response carries X-Content-Type-Options: nosniff."),
      e(kHeaderReferrerPolicy, G::kAttacks, false, "Referrer-Policy set",
        "The response carries a Referrer-Policy header."),
      e(kLeakServerStatus, G::kAttacks, true, "No server status pages",
        "Neither /server-status/ nor /server-info/ exposes Apache "
        "diagnostics."),
      e(kLeakTestScripts, G::kAttacks, true, "No test scripts",
        "Neither /test.php nor /phpinfo.php exposes phpinfo() output."),
      e(kLeakGit, G::kAttacks, true, "No exposed Git repository",
        "/.git/HEAD is not readable."),
      e(kLeakSvn, G::kAttacks, true, "No exposed SVN repository",
        "/.svn/entries is not readable."),
      e(kLeakCoreDump, G::kAttacks, true, "No core dump",
        "/core does not serve a core dump."),
      e(kDnssec, G::kAttacks, false, "DNSSEC",
        "The validating resolver authenticates the site's DNS records."),
      e(kServerVersionBanner, G::kAttacks, false, "No server version banner",
        "The Server header does not disclose a software version."),
      e(kCmsGenerator, G::kAttacks, false, "No CMS version disclosure",
        "The HTML does not carry a generator meta tag with a version."),
      e(kOutdatedLibs, G::kAttacks, false, "Up-to-date JavaScript libraries",
        "Every detected client-side library is at its latest known "
        "version."),

      e(kHttpsOffered, G::kEncWeb, true, "HTTPS offered",
        "The site completes a TLS handshake on the HTTPS port."),
      e(kHttpsRedirect, G::kEncWeb, true, "Redirect to HTTPS",
        "Plain-HTTP requests are forwarded to the HTTPS version."),
      e(kCertValid, G::kEncWeb, true, "Valid certificate",
        "The certificate chains to a trusted root, matches the host name "
        "and is not expired."),
      e(kHsts, G::kEncWeb, false, "HSTS",
        "The HTTPS response carries Strict-Transport-Security with a "
        "positive max-age."),
      e(kSslv3Disabled, G::kEncWeb, false, "SSLv3 disabled (POODLE)",
        "The server refuses SSLv3 handshakes."),
      e(kLegacyTlsDisabled, G::kEncWeb, false, "TLS 1.0/1.1 disabled",
        "The server refuses TLS 1.0 and TLS 1.1 handshakes."),
      e(kModernTlsOffered, G::kEncWeb, false, "TLS 1.2 or 1.3 offered",
        "The server accepts TLS 1.2 or TLS 1.3."),
      e(kMixedContent, G::kEncWeb, false, "No mixed content",
        "The HTTPS page embeds no plain-HTTP resources."),

      e(kMailStarttls, G::kEncMail, true, "STARTTLS on primary MX",
        "The primary mail server offers STARTTLS and completes the "
        "handshake."),
      e(kMailCertValid, G::kEncMail, false, "Valid mail certificate",
        "The mail server certificate is trusted, matches the MX host and is "
        "not expired."),
      e(kMailSslv3Disabled, G::kEncMail, false, "Mail SSLv3 disabled",
        "The mail server refuses SSLv3 after STARTTLS."),
      e(kMailLegacyTlsDisabled, G::kEncMail, false, "Mail TLS 1.0/1.1 disabled",
        "The mail server refuses TLS 1.0 and TLS 1.1 after STARTTLS."),
      e(kSpf, G::kEncMail, false, "SPF policy",
        "An SPF record ends in -all or ~all."),
      e(kDmarc, G::kEncMail, false, "DMARC policy",
        "A DMARC record requests quarantine or reject."),
  };
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    auto tab = line.find('\t');
    out.push_back(TrimWhitespace(line.substr(0, tab)));
    if (tab == std::string_view::npos)
      break;
    line.remove_prefix(tab + 1);
  }
  return out;
}

}  // namespace

const CheckCatalog& CheckCatalog::Default() {
  static const CheckCatalog* catalog = [] {
    auto* c = new CheckCatalog();
    c->entries_ = DefaultEntries();
    return c;
  }();
  return *catalog;
}

CheckCatalog CheckCatalog::Parse(std::string_view text) {
  CheckCatalog catalog = Default();
  std::set<std::string> listed;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = TrimWhitespace(raw);
    if (line.empty() || line.front() == '#')
      continue;
    auto fields = SplitTabs(line);
    std::string where = "catalog line " + std::to_string(line_no) + ": ";
    if (fields.size() != 3)
      throw CatalogError(where + "expected 3 tab-separated fields");
    std::string id(fields[0]);
    auto group = ParseGroup(fields[1]);
    if (!group)
      throw CatalogError(where + "unknown group '" + std::string(fields[1]) +
                         "'");
    if (fields[2] != "critical" && fields[2] != "normal")
      throw CatalogError(where + "criticality must be critical|normal");
    if (!listed.insert(id).second)
      throw CatalogError(where + "check '" + id + "' listed twice");
    auto it = std::find_if(catalog.entries_.begin(), catalog.entries_.end(),
                           [&](const CatalogEntry& e) { return e.id == id; });
    if (it == catalog.entries_.end())
      throw CatalogError(where + "unknown check '" + id + "'");
    it->group = *group;
    it->critical = fields[2] == "critical";
  }
  for (CheckGroup g : kAllGroups) {
    if (catalog.InGroup(g).empty())
      throw CatalogError("group " + std::string(GroupName(g)) +
                         " has no checks");
  }
  return catalog;
}

CheckCatalog CheckCatalog::LoadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw CatalogError("cannot open catalog file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

const CatalogEntry* CheckCatalog::Find(std::string_view id) const {
  for (const CatalogEntry& e : entries_) {
    if (e.id == id)
      return &e;
  }
  return nullptr;
}

std::vector<const CatalogEntry*> CheckCatalog::InGroup(CheckGroup group) const {
  std::vector<const CatalogEntry*> out;
  for (const CatalogEntry& e : entries_) {
    if (e.group == group)
      out.push_back(&e);
  }
  return out;
}

std::string CheckCatalog::Serialize() const {
  std::string out;
  for (const CatalogEntry& e : entries_) {
    out += e.id + "\t" + std::string(GroupName(e.group)) + "\t" +
           (e.critical ? "critical" : "normal") + "\n";
  }
  return out;
}

}  // namespace sitebench
