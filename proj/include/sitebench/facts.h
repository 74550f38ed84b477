#ifndef SITEBENCH_FACTS_H_
#define SITEBENCH_FACTS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sitebench {

// Raw observations produced by the scanners. Each bundle is absent from a
// ScanRun when its scanner failed outright.

enum class Tristate { kUnknown, kNo, kYes };

std::string_view TristateName(Tristate t);
std::optional<Tristate> ParseTristate(std::string_view name);

enum class TlsProtocol { kSslv3, kTls10, kTls11, kTls12, kTls13 };

// Probe order, highest first.
inline constexpr std::array<TlsProtocol, 5> kProbeOrder = {
    TlsProtocol::kTls13, TlsProtocol::kTls12, TlsProtocol::kTls11,
    TlsProtocol::kTls10, TlsProtocol::kSslv3};

std::string_view ProtocolName(TlsProtocol p);
std::optional<TlsProtocol> ParseProtocol(std::string_view name);

enum class ProtocolSupport { kUnknown, kOffered, kRefused };

std::string_view SupportName(ProtocolSupport s);
std::optional<ProtocolSupport> ParseSupport(std::string_view name);

using ProtocolMap = std::map<TlsProtocol, ProtocolSupport>;

ProtocolMap UnknownProtocols();

inline constexpr std::array<std::string_view, 6> kSecurityHeaders = {
    "Content-Security-Policy", "X-XSS-Protection",          "X-Frame-Options",
    "X-Content-Type-Options",  "Strict-Transport-Security", "Referrer-Policy"};

struct FingerprintHit {
  std::string signature_id;
  std::string evidence;
  bool operator==(const FingerprintHit&) const = default;
};

struct ScriptLib {
  std::string name;
  std::string version;
  std::string latest;
  bool operator==(const ScriptLib&) const = default;
};

struct CdnHit {
  std::string host;
  std::string cdn;
  bool operator==(const CdnHit&) const = default;
};

struct ContentFacts {
  std::string final_url;
  std::vector<std::string> redirect_chain;
  std::set<std::string> third_party_hosts;
  std::set<std::string> tracker_hosts;
  int cookies_first_party = 0;
  int cookies_third_party = 0;
  std::map<std::string, std::optional<std::string>> security_headers;
  std::vector<std::string> mixed_content_urls;
  std::vector<FingerprintHit> fingerprint_hits;
  std::optional<std::string> server_banner;
  std::optional<std::string> generator;
  std::vector<ScriptLib> script_libs;
  std::vector<CdnHit> cdn_hosts;

  bool operator==(const ContentFacts&) const = default;
};

struct LeakFinding {
  std::string path;
  bool detected = false;
  std::optional<std::string> signature;
  int http_status = 0;
  bool operator==(const LeakFinding&) const = default;
};

struct LeakFacts {
  std::vector<LeakFinding> findings;
  bool operator==(const LeakFacts&) const = default;
};

struct TlsFacts {
  bool https_offered = false;
  bool https_redirect = false;
  ProtocolMap protocols = UnknownProtocols();
  bool cert_valid = false;
  bool cert_hostname_match = false;
  bool cert_not_expired = false;
  bool cert_chain_trusted = false;
  bool hsts_present = false;
  std::optional<int64_t> hsts_max_age;
  bool poodle_susceptible = false;

  bool operator==(const TlsFacts&) const = default;
};

struct MailTlsFacts {
  std::optional<std::string> mx_host;
  Tristate starttls_offered = Tristate::kUnknown;
  ProtocolMap protocols = UnknownProtocols();
  Tristate cert_valid = Tristate::kUnknown;
  std::optional<std::string> banner;

  bool operator==(const MailTlsFacts&) const = default;
};

enum class DnsStatus { kOk, kNxDomain, kTimeout };
enum class SpfPolicy { kHardFail, kSoftFail, kNeutral, kPassAll, kAbsent };
enum class DmarcPolicy { kNone, kQuarantine, kReject, kAbsent };
enum class DnssecSignal { kValidated, kSignedUnvalidated, kUnsigned, kUnknown };

std::string_view DnsStatusName(DnsStatus s);
std::string_view SpfPolicyName(SpfPolicy p);
std::string_view DmarcPolicyName(DmarcPolicy p);
std::string_view DnssecSignalName(DnssecSignal s);
std::optional<DnsStatus> ParseDnsStatus(std::string_view s);
std::optional<SpfPolicy> ParseSpfPolicy(std::string_view s);
std::optional<DmarcPolicy> ParseDmarcPolicy(std::string_view s);
std::optional<DnssecSignal> ParseDnssecSignal(std::string_view s);

struct MxRecord {
  int preference = 0;
  std::string host;
  bool operator==(const MxRecord&) const = default;
};

struct DnsFacts {
  DnsStatus status = DnsStatus::kOk;
  std::vector<std::string> a_records;
  std::vector<MxRecord> mx_records;
  std::vector<std::string> ns_records;
  std::optional<std::string> spf_record;
  SpfPolicy spf_policy = SpfPolicy::kAbsent;
  std::optional<std::string> dmarc_record;
  DmarcPolicy dmarc_policy = DmarcPolicy::kAbsent;
  DnssecSignal dnssec_signal = DnssecSignal::kUnknown;

  // Lowest preference wins; ties go to the lexicographically smallest host.
  std::optional<std::string> PrimaryMx() const;

  bool operator==(const DnsFacts&) const = default;
};

enum class ServerRole { kWeb, kMail, kNs };

std::string_view RoleName(ServerRole r);
std::optional<ServerRole> ParseRole(std::string_view s);

struct GeoLocation {
  ServerRole role = ServerRole::kWeb;
  std::string host;
  std::string ip;
  std::optional<std::string> country;
  bool operator==(const GeoLocation&) const = default;
};

struct GeoFacts {
  std::vector<GeoLocation> locations;
  bool operator==(const GeoFacts&) const = default;
};

struct ScanFacts {
  std::optional<DnsFacts> dns;
  std::optional<ContentFacts> content;
  std::optional<LeakFacts> leaks;
  std::optional<TlsFacts> tls;
  std::optional<MailTlsFacts> mail;
  std::optional<GeoFacts> geo;

  bool operator==(const ScanFacts&) const = default;
};

}  // namespace sitebench

#endif  // SITEBENCH_FACTS_H_
