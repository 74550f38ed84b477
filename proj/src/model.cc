#include "sitebench/model.h"

#include <algorithm>
#include <set>
#include <tuple>
#include <utility>

#include "sitebench/url.h"

namespace sitebench {

namespace {

template <typename Enum, size_t N>
using NameTable = std::array<std::pair<Enum, std::string_view>, N>;

template <typename Enum, size_t N>
std::string_view NameOf(const NameTable<Enum, N>& table, Enum value) {
  for (const auto& [e, name] : table) {
    if (e == value)
      return name;
  }
  return "?";
}

template <typename Enum, size_t N>
std::optional<Enum> ValueOf(const NameTable<Enum, N>& table,
                            std::string_view name) {
  for (const auto& [e, n] : table) {
    if (n == name)
      return e;
  }
  return std::nullopt;
}

constexpr NameTable<CheckGroup, 4> kGroupNames = {{
    {CheckGroup::kNoTrack, "NoTrack"},
    {CheckGroup::kAttacks, "Attacks"},
    {CheckGroup::kEncWeb, "EncWeb"},
    {CheckGroup::kEncMail, "EncMail"},
}};

constexpr NameTable<Outcome, 4> kOutcomeNames = {{
    {Outcome::kPass, "pass"},
    {Outcome::kFail, "fail"},
    {Outcome::kNeutral, "neutral"},
    {Outcome::kError, "error"},
}};

constexpr NameTable<Color, 4> kColorNames = {{
    {Color::kGreen, "green"},
    {Color::kYellow, "yellow"},
    {Color::kNeutral, "neutral"},
    {Color::kRed, "red"},
}};

constexpr NameTable<ScanStatus, 5> kStatusNames = {{
    {ScanStatus::kQueued, "queued"},
    {ScanStatus::kRunning, "running"},
    {ScanStatus::kDone, "done"},
    {ScanStatus::kFailed, "failed"},
    {ScanStatus::kBlacklisted, "blacklisted"},
}};

constexpr NameTable<Tristate, 3> kTristateNames = {{
    {Tristate::kUnknown, "unknown"},
    {Tristate::kNo, "no"},
    {Tristate::kYes, "yes"},
}};

constexpr NameTable<TlsProtocol, 5> kProtocolNames = {{
    {TlsProtocol::kSslv3, "SSLv3"},
    {TlsProtocol::kTls10, "TLS1.0"},
    {TlsProtocol::kTls11, "TLS1.1"},
    {TlsProtocol::kTls12, "TLS1.2"},
    {TlsProtocol::kTls13, "TLS1.3"},
}};

constexpr NameTable<ProtocolSupport, 3> kSupportNames = {{
    {ProtocolSupport::kUnknown, "unknown"},
    {ProtocolSupport::kOffered, "offered"},
    {ProtocolSupport::kRefused, "refused"},
}};

constexpr NameTable<DnsStatus, 3> kDnsStatusNames = {{
    {DnsStatus::kOk, "ok"},
    {DnsStatus::kNxDomain, "nxdomain"},
    {DnsStatus::kTimeout, "timeout"},
}};

constexpr NameTable<SpfPolicy, 5> kSpfNames = {{
    {SpfPolicy::kHardFail, "hard_fail"},
    {SpfPolicy::kSoftFail, "soft_fail"},
    {SpfPolicy::kNeutral, "neutral"},
    {SpfPolicy::kPassAll, "pass_all"},
    {SpfPolicy::kAbsent, "absent"},
}};

constexpr NameTable<DmarcPolicy, 4> kDmarcNames = {{
    {DmarcPolicy::kNone, "none"},
    {DmarcPolicy::kQuarantine, "quarantine"},
    {DmarcPolicy::kReject, "reject"},
    {DmarcPolicy::kAbsent, "absent"},
}};

constexpr NameTable<DnssecSignal, 4> kDnssecNames = {{
    {DnssecSignal::kValidated, "validated"},
    {DnssecSignal::kSignedUnvalidated, "signed_unvalidated"},
    {DnssecSignal::kUnsigned, "unsigned"},
    {DnssecSignal::kUnknown, "unknown"},
}};

constexpr NameTable<ServerRole, 3> kRoleNames = {{
    {ServerRole::kWeb, "web"},
    {ServerRole::kMail, "mail"},
    {ServerRole::kNs, "ns"},
}};

}  // namespace

int64_t ToUnixSeconds(TimePoint t) {
  return std::chrono::duration_cast<std::chrono::seconds>(t.time_since_epoch())
      .count();
}

TimePoint FromUnixSeconds(int64_t s) {
  return TimePoint(std::chrono::seconds(s));
}

std::string_view GroupName(CheckGroup g) {
  return NameOf(kGroupNames, g);
}
std::optional<CheckGroup> ParseGroup(std::string_view n) {
  return ValueOf(kGroupNames, n);
}
std::string_view OutcomeName(Outcome o) {
  return NameOf(kOutcomeNames, o);
}
std::optional<Outcome> ParseOutcome(std::string_view n) {
  return ValueOf(kOutcomeNames, n);
}
std::string_view ColorName(Color c) {
  return NameOf(kColorNames, c);
}
std::optional<Color> ParseColor(std::string_view n) {
  return ValueOf(kColorNames, n);
}
std::string_view ScanStatusName(ScanStatus s) {
  return NameOf(kStatusNames, s);
}
std::optional<ScanStatus> ParseScanStatus(std::string_view n) {
  return ValueOf(kStatusNames, n);
}
std::string_view TristateName(Tristate t) {
  return NameOf(kTristateNames, t);
}
std::optional<Tristate> ParseTristate(std::string_view n) {
  return ValueOf(kTristateNames, n);
}
std::string_view ProtocolName(TlsProtocol p) {
  return NameOf(kProtocolNames, p);
}
std::optional<TlsProtocol> ParseProtocol(std::string_view n) {
  return ValueOf(kProtocolNames, n);
}
std::string_view SupportName(ProtocolSupport s) {
  return NameOf(kSupportNames, s);
}
std::optional<ProtocolSupport> ParseSupport(std::string_view n) {
  return ValueOf(kSupportNames, n);
}
std::string_view DnsStatusName(DnsStatus s) {
  return NameOf(kDnsStatusNames, s);
}
std::optional<DnsStatus> ParseDnsStatus(std::string_view n) {
  return ValueOf(kDnsStatusNames, n);
}
std::string_view SpfPolicyName(SpfPolicy p) {
  return NameOf(kSpfNames, p);
}
std::optional<SpfPolicy> ParseSpfPolicy(std::string_view n) {
  return ValueOf(kSpfNames, n);
}
std::string_view DmarcPolicyName(DmarcPolicy p) {
  return NameOf(kDmarcNames, p);
}
std::optional<DmarcPolicy> ParseDmarcPolicy(std::string_view n) {
  return ValueOf(kDmarcNames, n);
}
std::string_view DnssecSignalName(DnssecSignal s) {
  return NameOf(kDnssecNames, s);
}
std::optional<DnssecSignal> ParseDnssecSignal(std::string_view n) {
  return ValueOf(kDnssecNames, n);
}
std::string_view RoleName(ServerRole r) {
  return NameOf(kRoleNames, r);
}
std::optional<ServerRole> ParseRole(std::string_view n) {
  return ValueOf(kRoleNames, n);
}

ProtocolMap UnknownProtocols() {
  ProtocolMap map;
  for (TlsProtocol p : kProbeOrder)
    map[p] = ProtocolSupport::kUnknown;
  return map;
}

std::optional<std::string> DnsFacts::PrimaryMx() const {
  if (mx_records.empty())
    return std::nullopt;
  auto best = std::min_element(mx_records.begin(), mx_records.end(),
                               [](const MxRecord& a, const MxRecord& b) {
                                 return std::tie(a.preference, a.host) <
                                        std::tie(b.preference, b.host);
                               });
  return best->host;
}

void ValidateSiteList(const SiteList& list) {
  if (list.sites.empty())
    throw InvalidSiteList("site list is empty");
  if (list.access_token_hash.empty())
    throw InvalidSiteList("site list has no access token hash");
  std::set<std::string> seen;
  std::set<std::string> schema(list.property_schema.begin(),
                               list.property_schema.end());
  if (schema.size() != list.property_schema.size())
    throw InvalidSiteList("duplicate property name");
  for (const Site& site : list.sites) {
    std::string normalized;
    try {
      normalized = NormalizeUrl(site.url);
    } catch (const MalformedUrl& e) {
      throw InvalidSiteList(e.what());
    }
    if (!seen.insert(normalized).second)
      throw InvalidSiteList("duplicate site: " + normalized);
    if (site.properties.size() != schema.size())
      throw InvalidSiteList("properties of " + normalized +
                            " do not match the schema");
    for (const auto& [key, value] : site.properties) {
      if (!schema.count(key))
        throw InvalidSiteList("unknown property '" + key + "'");
    }
  }
}

void ConformProperties(SiteList& list) {
  for (Site& site : list.sites) {
    Properties conformed;
    for (const std::string& key : list.property_schema) {
      auto it = site.properties.find(key);
      conformed[key] = it == site.properties.end() ? std::nullopt : it->second;
    }
    site.properties = std::move(conformed);
  }
}

RankingScheme ParseGroupOrder(std::string_view text) {
  RankingScheme scheme;
  scheme.name = "custom";
  size_t index = 0;
  std::set<CheckGroup> seen;
  while (true) {
    size_t comma = text.find(',');
    std::string_view part = TrimWhitespace(text.substr(0, comma));
    auto group = ParseGroup(part);
    if (!group)
      throw InvalidGroupOrder("unknown check group '" + std::string(part) +
                              "'");
    if (!seen.insert(*group).second)
      throw InvalidGroupOrder("check group '" + std::string(part) +
                              "' listed twice");
    if (index >= scheme.group_order.size())
      throw InvalidGroupOrder("too many check groups");
    scheme.group_order[index++] = *group;
    if (comma == std::string_view::npos)
      break;
    text.remove_prefix(comma + 1);
  }
  if (index != scheme.group_order.size())
    throw InvalidGroupOrder("group order must name all four check groups");
  return scheme;
}

std::string FormatGroupOrder(const RankingScheme& scheme) {
  std::string out;
  for (CheckGroup g : scheme.group_order) {
    if (!out.empty())
      out += ',';
    out += GroupName(g);
  }
  return out;
}

}  // namespace sitebench
