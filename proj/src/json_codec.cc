#include "sitebench/json_codec.h"

#include <ctime>

namespace sitebench {

namespace {

template <typename T>
Json Opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

const Json& Field(const Json& j, const char* key) {
  if (!j.is_object())
    throw JsonError(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end())
    throw JsonError(std::string("missing field '") + key + "'");
  return *it;
}

template <typename T>
T Get(const Json& j, const char* key) {
  try {
    return Field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw JsonError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
std::optional<T> GetOpt(const Json& j, const char* key) {
  const Json& v = Field(j, key);
  if (v.is_null())
    return std::nullopt;
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw JsonError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename E>
E GetEnum(const Json& j,
          const char* key,
          std::optional<E> (*parse)(std::string_view)) {
  std::string name = Get<std::string>(j, key);
  std::optional<E> value = parse(name);
  if (!value)
    throw JsonError(std::string("field '") + key + "': unknown value '" + name +
                    "'");
  return *value;
}

Json ProtocolsToJson(const ProtocolMap& protocols) {
  Json j = Json::object();
  for (const auto& [p, s] : protocols)
    j[std::string(ProtocolName(p))] = SupportName(s);
  return j;
}

ProtocolMap ProtocolsFromJson(const Json& j) {
  if (!j.is_object())
    throw JsonError("protocols must be an object");
  ProtocolMap out = UnknownProtocols();
  for (const auto& [name, value] : j.items()) {
    auto p = ParseProtocol(name);
    auto s = value.is_string() ? ParseSupport(value.get<std::string>())
                               : std::nullopt;
    if (!p || !s)
      throw JsonError("bad protocol entry '" + name + "'");
    out[*p] = *s;
  }
  return out;
}

Json DnsToJson(const DnsFacts& d) {
  Json mx = Json::array();
  for (const MxRecord& r : d.mx_records)
    mx.push_back({{"preference", r.preference}, {"host", r.host}});
  return {{"status", DnsStatusName(d.status)},
          {"a_records", d.a_records},
          {"mx_records", mx},
          {"ns_records", d.ns_records},
          {"spf_record", Opt(d.spf_record)},
          {"spf_policy", SpfPolicyName(d.spf_policy)},
          {"dmarc_record", Opt(d.dmarc_record)},
          {"dmarc_policy", DmarcPolicyName(d.dmarc_policy)},
          {"dnssec_signal", DnssecSignalName(d.dnssec_signal)}};
}

DnsFacts DnsFromJson(const Json& j) {
  DnsFacts d;
  d.status = GetEnum(j, "status", &ParseDnsStatus);
  d.a_records = Get<std::vector<std::string>>(j, "a_records");
  for (const Json& r : Field(j, "mx_records"))
    d.mx_records.push_back(
        {Get<int>(r, "preference"), Get<std::string>(r, "host")});
  d.ns_records = Get<std::vector<std::string>>(j, "ns_records");
  d.spf_record = GetOpt<std::string>(j, "spf_record");
  d.spf_policy = GetEnum(j, "spf_policy", &ParseSpfPolicy);
  d.dmarc_record = GetOpt<std::string>(j, "dmarc_record");
  d.dmarc_policy = GetEnum(j, "dmarc_policy", &ParseDmarcPolicy);
  d.dnssec_signal = GetEnum(j, "dnssec_signal", &ParseDnssecSignal);
  return d;
}

Json ContentToJson(const ContentFacts& c) {
  Json headers = Json::object();
  for (const auto& [name, value] : c.security_headers)
    headers[name] = Opt(value);
  Json fingerprints = Json::array();
  for (const FingerprintHit& h : c.fingerprint_hits)
    fingerprints.push_back(
        {{"signature_id", h.signature_id}, {"evidence", h.evidence}});
  Json libs = Json::array();
  for (const ScriptLib& l : c.script_libs)
    libs.push_back(
        {{"name", l.name}, {"version", l.version}, {"latest", l.latest}});
  Json cdns = Json::array();
  for (const CdnHit& h : c.cdn_hosts)
    cdns.push_back({{"host", h.host}, {"cdn", h.cdn}});
  return {{"final_url", c.final_url},
          {"redirect_chain", c.redirect_chain},
          {"third_party_hosts", c.third_party_hosts},
          {"tracker_hosts", c.tracker_hosts},
          {"cookies_first_party", c.cookies_first_party},
          {"cookies_third_party", c.cookies_third_party},
          {"security_headers", headers},
          {"mixed_content_urls", c.mixed_content_urls},
          {"fingerprint_hits", fingerprints},
          {"server_banner", Opt(c.server_banner)},
          {"generator", Opt(c.generator)},
          {"script_libs", libs},
          {"cdn_hosts", cdns}};
}

ContentFacts ContentFromJson(const Json& j) {
  ContentFacts c;
  c.final_url = Get<std::string>(j, "final_url");
  c.redirect_chain = Get<std::vector<std::string>>(j, "redirect_chain");
  c.third_party_hosts = Get<std::set<std::string>>(j, "third_party_hosts");
  c.tracker_hosts = Get<std::set<std::string>>(j, "tracker_hosts");
  c.cookies_first_party = Get<int>(j, "cookies_first_party");
  c.cookies_third_party = Get<int>(j, "cookies_third_party");
  const Json& headers = Field(j, "security_headers");
  if (!headers.is_object())
    throw JsonError("security_headers must be an object");
  for (const auto& [name, value] : headers.items()) {
    c.security_headers[name] =
        value.is_null() ? std::nullopt
                        : std::optional<std::string>(value.get<std::string>());
  }
  c.mixed_content_urls = Get<std::vector<std::string>>(j, "mixed_content_urls");
  for (const Json& h : Field(j, "fingerprint_hits"))
    c.fingerprint_hits.push_back(
        {Get<std::string>(h, "signature_id"), Get<std::string>(h, "evidence")});
  c.server_banner = GetOpt<std::string>(j, "server_banner");
  c.generator = GetOpt<std::string>(j, "generator");
  for (const Json& l : Field(j, "script_libs"))
    c.script_libs.push_back({Get<std::string>(l, "name"),
                             Get<std::string>(l, "version"),
                             Get<std::string>(l, "latest")});
  for (const Json& h : Field(j, "cdn_hosts"))
    c.cdn_hosts.push_back(
        {Get<std::string>(h, "host"), Get<std::string>(h, "cdn")});
  return c;
}

Json LeaksToJson(const LeakFacts& l) {
  Json findings = Json::array();
  for (const LeakFinding& f : l.findings)
    findings.push_back({{"path", f.path},
                        {"detected", f.detected},
                        {"signature", Opt(f.signature)},
                        {"http_status", f.http_status}});
  return {{"findings", findings}};
}

LeakFacts LeaksFromJson(const Json& j) {
  LeakFacts l;
  for (const Json& f : Field(j, "findings"))
    l.findings.push_back({Get<std::string>(f, "path"), Get<bool>(f, "detected"),
                          GetOpt<std::string>(f, "signature"),
                          Get<int>(f, "http_status")});
  return l;
}

Json TlsToJson(const TlsFacts& t) {
  return {{"https_offered", t.https_offered},
          {"https_redirect", t.https_redirect},
          {"protocols", ProtocolsToJson(t.protocols)},
          {"cert_valid", t.cert_valid},
          {"cert_hostname_match", t.cert_hostname_match},
          {"cert_not_expired", t.cert_not_expired},
          {"cert_chain_trusted", t.cert_chain_trusted},
          {"hsts_present", t.hsts_present},
          {"hsts_max_age", Opt(t.hsts_max_age)},
          {"poodle_susceptible", t.poodle_susceptible}};
}

TlsFacts TlsFromJson(const Json& j) {
  TlsFacts t;
  t.https_offered = Get<bool>(j, "https_offered");
  t.https_redirect = Get<bool>(j, "https_redirect");
  t.protocols = ProtocolsFromJson(Field(j, "protocols"));
  t.cert_valid = Get<bool>(j, "cert_valid");
  t.cert_hostname_match = Get<bool>(j, "cert_hostname_match");
  t.cert_not_expired = Get<bool>(j, "cert_not_expired");
  t.cert_chain_trusted = Get<bool>(j, "cert_chain_trusted");
  t.hsts_present = Get<bool>(j, "hsts_present");
  t.hsts_max_age = GetOpt<int64_t>(j, "hsts_max_age");
  t.poodle_susceptible = Get<bool>(j, "poodle_susceptible");
  return t;
}

Json MailToJson(const MailTlsFacts& m) {
  return {{"mx_host", Opt(m.mx_host)},
          {"starttls_offered", TristateName(m.starttls_offered)},
          {"protocols", ProtocolsToJson(m.protocols)},
          {"cert_valid", TristateName(m.cert_valid)},
          {"banner", Opt(m.banner)}};
}

MailTlsFacts MailFromJson(const Json& j) {
  MailTlsFacts m;
  m.mx_host = GetOpt<std::string>(j, "mx_host");
  m.starttls_offered = GetEnum(j, "starttls_offered", &ParseTristate);
  m.protocols = ProtocolsFromJson(Field(j, "protocols"));
  m.cert_valid = GetEnum(j, "cert_valid", &ParseTristate);
  m.banner = GetOpt<std::string>(j, "banner");
  return m;
}

Json GeoToJson(const GeoFacts& g) {
  Json locations = Json::array();
  for (const GeoLocation& l : g.locations)
    locations.push_back({{"role", RoleName(l.role)},
                         {"host", l.host},
                         {"ip", l.ip},
                         {"country", Opt(l.country)}});
  return {{"locations", locations}};
}

GeoFacts GeoFromJson(const Json& j) {
  GeoFacts g;
  for (const Json& l : Field(j, "locations"))
    g.locations.push_back(
        {GetEnum(l, "role", &ParseRole), Get<std::string>(l, "host"),
         Get<std::string>(l, "ip"), GetOpt<std::string>(l, "country")});
  return g;
}

template <typename T, typename Encode>
Json Bundle(const std::optional<T>& v, Encode encode) {
  return v ? encode(*v) : Json(nullptr);
}

template <typename T, typename Decode>
std::optional<T> Unbundle(const Json& j, const char* key, Decode decode) {
  const Json& v = Field(j, key);
  if (v.is_null())
    return std::nullopt;
  return decode(v);
}

}  // namespace

std::string FormatTimestamp(TimePoint t) {
  std::time_t secs = static_cast<std::time_t>(ToUnixSeconds(t));
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<TimePoint> ParseTimestamp(std::string_view text) {
  std::tm tm{};
  std::string s(text);
  const char* end = strptime(s.c_str(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  if (!end || *end != '\0')
    return std::nullopt;
  return FromUnixSeconds(static_cast<int64_t>(timegm(&tm)));
}

Json FactsToJson(const ScanFacts& f) {
  return {{"dns", Bundle(f.dns, DnsToJson)},
          {"content", Bundle(f.content, ContentToJson)},
          {"leaks", Bundle(f.leaks, LeaksToJson)},
          {"tls", Bundle(f.tls, TlsToJson)},
          {"mail", Bundle(f.mail, MailToJson)},
          {"geo", Bundle(f.geo, GeoToJson)}};
}

ScanFacts FactsFromJson(const Json& j) {
  ScanFacts f;
  f.dns = Unbundle<DnsFacts>(j, "dns", DnsFromJson);
  f.content = Unbundle<ContentFacts>(j, "content", ContentFromJson);
  f.leaks = Unbundle<LeakFacts>(j, "leaks", LeaksFromJson);
  f.tls = Unbundle<TlsFacts>(j, "tls", TlsFromJson);
  f.mail = Unbundle<MailTlsFacts>(j, "mail", MailFromJson);
  f.geo = Unbundle<GeoFacts>(j, "geo", GeoFromJson);
  return f;
}

Json ResultsToJson(const std::vector<CheckResult>& results) {
  Json out = Json::array();
  for (const CheckResult& r : results)
    out.push_back({{"check_id", r.check_id},
                   {"group", GroupName(r.group)},
                   {"outcome", OutcomeName(r.outcome)},
                   {"critical", r.critical},
                   {"evidence", r.evidence}});
  return out;
}

std::vector<CheckResult> ResultsFromJson(const Json& j) {
  if (!j.is_array())
    throw JsonError("check results must be an array");
  std::vector<CheckResult> out;
  for (const Json& r : j)
    out.push_back({Get<std::string>(r, "check_id"),
                   GetEnum(r, "group", &ParseGroup),
                   GetEnum(r, "outcome", &ParseOutcome),
                   Get<bool>(r, "critical"), Get<std::string>(r, "evidence")});
  return out;
}

Json PropertiesToJson(const Properties& properties) {
  Json out = Json::object();
  for (const auto& [key, value] : properties)
    out[key] = Opt(value);
  return out;
}

Properties PropertiesFromJson(const Json& j) {
  if (!j.is_object())
    throw JsonError("properties must be an object");
  Properties out;
  for (const auto& [key, value] : j.items()) {
    if (value.is_null())
      out[key] = std::nullopt;
    else if (value.is_string())
      out[key] = value.get<std::string>();
    else
      out[key] = value.dump();
  }
  return out;
}

Json RunToJson(const ScanRun& run) {
  return {{"id", run.id},
          {"site_ref", run.site_ref},
          {"list_ref", Opt(run.list_ref)},
          {"url", run.url},
          {"status", ScanStatusName(run.status)},
          {"started_at", FormatTimestamp(run.started_at)},
          {"finished_at", FormatTimestamp(run.finished_at)},
          {"facts", FactsToJson(run.facts)},
          {"check_results", ResultsToJson(run.check_results)},
          {"module_errors", run.module_errors},
          {"note", run.note}};
}

ScanRun RunFromJson(const Json& j) {
  ScanRun run;
  run.id = Get<std::string>(j, "id");
  run.site_ref = Get<std::string>(j, "site_ref");
  run.list_ref = GetOpt<std::string>(j, "list_ref");
  run.url = Get<std::string>(j, "url");
  run.status = GetEnum(j, "status", &ParseScanStatus);
  auto started = ParseTimestamp(Get<std::string>(j, "started_at"));
  auto finished = ParseTimestamp(Get<std::string>(j, "finished_at"));
  if (!started || !finished)
    throw JsonError("bad timestamp");
  run.started_at = *started;
  run.finished_at = *finished;
  run.facts = FactsFromJson(Field(j, "facts"));
  run.check_results = ResultsFromJson(Field(j, "check_results"));
  run.module_errors = Get<std::vector<std::string>>(j, "module_errors");
  run.note = Get<std::string>(j, "note");
  return run;
}

Json RatingToJson(const SiteRating& rating) {
  Json groups = Json::object();
  for (const auto& [g, c] : rating.group_ratings)
    groups[std::string(GroupName(g))] = ColorName(c);
  return {{"site_ref", rating.site_ref},
          {"url", rating.url},
          {"group_ratings", groups},
          {"overall", ColorName(rating.overall)}};
}

std::string DumpJson(const Json& j, int indent) {
  return j.dump(indent, ' ', false, Json::error_handler_t::replace);
}

}  // namespace sitebench
