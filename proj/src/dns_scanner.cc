#include "sitebench/dns_scanner.h"

#include <algorithm>

#include "sitebench/url.h"

namespace sitebench {

namespace {

bool StartsWithNoCase(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() &&
         ToLowerAscii(s.substr(0, prefix.size())) == ToLowerAscii(prefix);
}

std::optional<std::string> FindTagged(const std::vector<std::string>& txts,
                                      std::string_view tag) {
  for (const std::string& t : txts) {
    std::string_view s = TrimWhitespace(t);
    if (StartsWithNoCase(s, tag) &&
        (s.size() == tag.size() || s[tag.size()] == ' ' ||
         s[tag.size()] == ';'))
      return std::string(s);
  }
  return std::nullopt;
}

struct Lookup {
  dns::QueryStatus status = dns::QueryStatus::kError;
  std::vector<dns::ResourceRecord> records;
  bool ad = false;
  bool rrsig = false;
};

Lookup Run(dns::DnsClient& client, std::string_view name, dns::RrType type) {
  Lookup out;
  dns::QueryResult r = client.Query(name, type, /*dnssec_ok=*/true);
  out.status = r.status;
  if (r.status != dns::QueryStatus::kOk)
    return out;
  out.ad = r.response.ad;
  for (const dns::ResourceRecord& rr : r.response.answers) {
    if (rr.type == type)
      out.records.push_back(rr);
    else if (rr.type == dns::RrType::kRrsig)
      out.rrsig = true;
  }
  return out;
}

std::vector<std::string> Texts(const Lookup& l) {
  std::vector<std::string> out;
  for (const auto& rr : l.records)
    out.push_back(rr.text);
  return out;
}

}  // namespace

std::optional<std::string> FindSpfRecord(const std::vector<std::string>& txts) {
  return FindTagged(txts, "v=spf1");
}

std::optional<std::string> FindDmarcRecord(
    const std::vector<std::string>& txts) {
  return FindTagged(txts, "v=DMARC1");
}

SpfPolicy SpfPolicyOf(std::string_view record) {
  std::string lower = ToLowerAscii(record);
  std::string_view rest = lower;
  while (!rest.empty()) {
    auto sp = rest.find_first_of(" \t");
    std::string_view term = rest.substr(0, sp);
    if (!term.empty()) {
      char q = term.front();
      std::string_view mech = term;
      if (q == '+' || q == '-' || q == '~' || q == '?')
        mech.remove_prefix(1);
      if (mech == "all") {
        switch (q) {
          case '-':
            return SpfPolicy::kHardFail;
          case '~':
            return SpfPolicy::kSoftFail;
          case '?':
            return SpfPolicy::kNeutral;
          default:
            return SpfPolicy::kPassAll;
        }
      }
    }
    if (sp == std::string_view::npos)
      break;
    rest.remove_prefix(sp + 1);
  }
  return SpfPolicy::kNeutral;
}

DmarcPolicy DmarcPolicyOf(std::string_view record) {
  std::string_view rest = record;
  while (!rest.empty()) {
    auto semi = rest.find(';');
    std::string_view tag = TrimWhitespace(rest.substr(0, semi));
    auto eq = tag.find('=');
    if (eq != std::string_view::npos &&
        TrimWhitespace(tag.substr(0, eq)) == "p") {
      std::string value = ToLowerAscii(TrimWhitespace(tag.substr(eq + 1)));
      if (value == "reject")
        return DmarcPolicy::kReject;
      if (value == "quarantine")
        return DmarcPolicy::kQuarantine;
      return DmarcPolicy::kNone;
    }
    if (semi == std::string_view::npos)
      break;
    rest.remove_prefix(semi + 1);
  }
  return DmarcPolicy::kNone;
}

DnsFacts ResolveDns(std::string_view host_in,
                    dns::DnsClient& client,
                    const PublicSuffixList& psl) {
  std::string host = ToLowerAscii(host_in);
  DnsFacts facts;
  Lookup a = Run(client, host, dns::RrType::kA);
  if (a.status == dns::QueryStatus::kTimeout) {
    facts.status = DnsStatus::kTimeout;
    return facts;
  }
  if (a.status == dns::QueryStatus::kNxDomain) {
    facts.status = DnsStatus::kNxDomain;
    facts.dnssec_signal = DnssecSignal::kUnsigned;
    return facts;
  }
  for (const auto& rr : a.records)
    facts.a_records.push_back(rr.text);
  for (const auto& rr : Run(client, host, dns::RrType::kAaaa).records)
    facts.a_records.push_back(rr.text);
  if (a.status != dns::QueryStatus::kOk)
    facts.dnssec_signal = DnssecSignal::kUnknown;
  else if (a.ad)
    facts.dnssec_signal = DnssecSignal::kValidated;
  else if (a.rrsig)
    facts.dnssec_signal = DnssecSignal::kSignedUnvalidated;
  else
    facts.dnssec_signal = DnssecSignal::kUnsigned;

  std::string org = psl.RegistrableDomain(host);
  std::vector<std::string> names = {host};
  if (org != host && !IsIpLiteral(host))
    names.push_back(org);

  for (const std::string& name : names) {
    Lookup mx = Run(client, name, dns::RrType::kMx);
    for (const auto& rr : mx.records) {
      if (!rr.text.empty())  // "." is a null MX
        facts.mx_records.push_back({rr.preference, rr.text});
    }
    if (!facts.mx_records.empty())
      break;
  }
  std::sort(facts.mx_records.begin(), facts.mx_records.end(),
            [](const MxRecord& x, const MxRecord& y) {
              return std::tie(x.preference, x.host) <
                     std::tie(y.preference, y.host);
            });
  for (const std::string& name : names) {
    for (const auto& rr : Run(client, name, dns::RrType::kNs).records)
      facts.ns_records.push_back(rr.text);
    if (!facts.ns_records.empty())
      break;
  }
  std::sort(facts.ns_records.begin(), facts.ns_records.end());
  for (const std::string& name : names) {
    facts.spf_record =
        FindSpfRecord(Texts(Run(client, name, dns::RrType::kTxt)));
    if (facts.spf_record)
      break;
  }
  for (const std::string& name : names) {
    facts.dmarc_record = FindDmarcRecord(
        Texts(Run(client, "_dmarc." + name, dns::RrType::kTxt)));
    if (facts.dmarc_record)
      break;
  }
  if (facts.spf_record)
    facts.spf_policy = SpfPolicyOf(*facts.spf_record);
  if (facts.dmarc_record)
    facts.dmarc_policy = DmarcPolicyOf(*facts.dmarc_record);
  return facts;
}

}  // namespace sitebench
