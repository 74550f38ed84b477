#include "sitebench/ranking.h"

#include <algorithm>
#include <regex>
#include <set>

#include "sitebench/signatures.h"
#include "sitebench/url.h"

namespace sitebench {

namespace {

struct Verdict {
  Outcome outcome = Outcome::kError;
  std::string evidence;
};

Verdict Pass(std::string evidence) {
  return {Outcome::kPass, std::move(evidence)};
}
Verdict Fail(std::string evidence) {
  return {Outcome::kFail, std::move(evidence)};
}
Verdict Neutral(std::string evidence) {
  return {Outcome::kNeutral, std::move(evidence)};
}
Verdict Missing(std::string_view module) {
  return {Outcome::kError, std::string(module) + " scan unavailable"};
}

template <typename C>
std::string Join(const C& items, std::string_view sep = ", ") {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty())
      out += sep;
    out += item;
  }
  return out;
}

bool DisclosesVersion(std::string_view s) {
  static const std::regex re(R"(\d+\.\d+|/\s*\d)");
  return std::regex_search(s.begin(), s.end(), re);
}

std::string HeaderText(const ContentFacts& c, std::string_view name) {
  auto it = c.security_headers.find(std::string(name));
  if (it == c.security_headers.end() || !it->second)
    return {};
  return std::string(TrimWhitespace(*it->second));
}

Verdict ProtocolVerdict(const ProtocolMap& protocols,
                        std::initializer_list<TlsProtocol> bad,
                        std::string_view what) {
  std::vector<std::string> offered;
  bool unknown = false;
  for (TlsProtocol p : bad) {
    auto it = protocols.find(p);
    ProtocolSupport s =
        it == protocols.end() ? ProtocolSupport::kUnknown : it->second;
    if (s == ProtocolSupport::kOffered)
      offered.push_back(std::string(ProtocolName(p)));
    else if (s == ProtocolSupport::kUnknown)
      unknown = true;
  }
  if (!offered.empty())
    return Fail(Join(offered) + " offered");
  if (unknown)
    return Neutral(std::string(what) + " support could not be determined");
  return Pass(std::string(what) + " refused");
}

Verdict ModernVerdict(const ProtocolMap& protocols) {
  std::vector<std::string> offered;
  bool unknown = false;
  for (TlsProtocol p : {TlsProtocol::kTls12, TlsProtocol::kTls13}) {
    auto s = protocols.at(p);
    if (s == ProtocolSupport::kOffered)
      offered.push_back(std::string(ProtocolName(p)));
    else if (s == ProtocolSupport::kUnknown)
      unknown = true;
  }
  if (!offered.empty())
    return Pass(Join(offered) + " offered");
  if (unknown)
    return Neutral("TLS 1.2/1.3 support could not be determined");
  return Fail("neither TLS 1.2 nor TLS 1.3 offered");
}

std::map<std::string, Verdict, std::less<>> Evaluate(const ScanFacts& f) {
  namespace c = checks;
  std::map<std::string, Verdict, std::less<>> v;
  auto set = [&](std::string_view id, Verdict verdict) {
    v[std::string(id)] = std::move(verdict);
  };

  // NoTrack / Attacks / EncWeb checks backed by content facts.
  if (const auto& content = f.content) {
    set(c::kThirdPartyTrackers, content->tracker_hosts.empty()
                                    ? Pass("no tracker hosts")
                                    : Fail(Join(content->tracker_hosts)));
    set(c::kThirdPartyHosts, content->third_party_hosts.empty()
                                 ? Pass("no third-party hosts")
                                 : Fail(Join(content->third_party_hosts)));
    set(c::kCookiesThirdParty,
        content->cookies_third_party == 0
            ? Pass(std::to_string(content->cookies_first_party) +
                   " first-party cookies")
            : Fail(std::to_string(content->cookies_third_party) +
                   " third-party cookies"));
    std::vector<std::string> fp;
    for (const auto& hit : content->fingerprint_hits)
      fp.push_back(hit.signature_id);
    set(c::kFingerprinting,
        fp.empty() ? Pass("no fingerprinting signatures") : Fail(Join(fp)));
    std::vector<std::string> cdn;
    for (const auto& hit : content->cdn_hosts)
      cdn.push_back(hit.host + " (" + hit.cdn + ")");
    set(c::kCdnUsage, cdn.empty() ? Pass("no CDN detected") : Fail(Join(cdn)));

    std::string csp = HeaderText(*content, "Content-Security-Policy");
    set(c::kHeaderCsp, csp.empty() ? Fail("header missing") : Pass(csp));
    std::string xss = HeaderText(*content, "X-XSS-Protection");
    set(c::kHeaderXssProtection, xss.empty()          ? Fail("header missing")
                                 : xss.front() == '1' ? Pass(xss)
                                                      : Fail(xss));
    std::string xfo = HeaderText(*content, "X-Frame-Options");
    std::string xfo_lower = ToLowerAscii(xfo);
    set(c::kHeaderFrameOptions,
        xfo.empty() ? Fail("header missing")
        : xfo_lower == "deny" || xfo_lower == "sameorigin" ? Pass(xfo)
                                                           : Fail(xfo));
    std::string xcto = HeaderText(*content, "X-Content-Type-Options");
    set(c::kHeaderContentTypeOptions, xcto.empty() ? Fail("header missing")
                                      : ToLowerAscii(xcto) == "nosniff"
                                          ? Pass(xcto)
                                          : Fail(xcto));
    std::string rp = HeaderText(*content, "Referrer-Policy");
    set(c::kHeaderReferrerPolicy,
        rp.empty() ? Fail("header missing") : Pass(rp));

    if (!content->server_banner)
      set(c::kServerVersionBanner, Pass("no Server header"));
    else if (DisclosesVersion(*content->server_banner))
      set(c::kServerVersionBanner, Fail(*content->server_banner));
    else
      set(c::kServerVersionBanner, Pass(*content->server_banner));
    if (!content->generator)
      set(c::kCmsGenerator, Pass("no generator tag"));
    else if (DisclosesVersion(*content->generator))
      set(c::kCmsGenerator, Fail(*content->generator));
    else
      set(c::kCmsGenerator, Pass(*content->generator));

    std::vector<std::string> outdated, current;
    for (const ScriptLib& lib : content->script_libs) {
      std::string label = lib.name + " " + lib.version;
      if (CompareVersions(lib.version, lib.latest) < 0)
        outdated.push_back(label + " < " + lib.latest);
      else
        current.push_back(label);
    }
    set(c::kOutdatedLibs, !outdated.empty() ? Fail(Join(outdated))
                          : current.empty()
                              ? Pass("no known libraries detected")
                              : Pass(Join(current)));

    if (content->final_url.rfind("https://", 0) != 0)
      set(c::kMixedContent, Neutral("final page is not served over HTTPS"));
    else if (content->mixed_content_urls.empty())
      set(c::kMixedContent, Pass("no plain-HTTP subresources"));
    else
      set(c::kMixedContent, Fail(Join(content->mixed_content_urls)));
  }

  if (const auto& geo = f.geo) {
    std::set<std::string> countries;
    int unknown = 0;
    for (const auto& loc : geo->locations) {
      if (loc.country)
        countries.insert(*loc.country);
      else
        ++unknown;
    }
    if (countries.empty())
      set(c::kServerLocation, Neutral("no server could be geolocated"));
    else if (countries.size() == 1)
      set(c::kServerLocation, Pass(*countries.begin()));
    else
      set(c::kServerLocation, Fail(Join(countries)));
  }

  if (const auto& leaks = f.leaks) {
    auto leak = [&](std::string_view id,
                    std::initializer_list<std::string_view> paths) {
      std::vector<std::string> hits;
      for (const LeakFinding& finding : leaks->findings) {
        if (finding.detected &&
            std::find(paths.begin(), paths.end(), finding.path) != paths.end())
          hits.push_back(finding.path + " (" + finding.signature.value_or("") +
                         ")");
      }
      set(id, hits.empty() ? Pass("not exposed") : Fail(Join(hits)));
    };
    leak(c::kLeakServerStatus, {"/server-status/", "/server-info/"});
    leak(c::kLeakTestScripts, {"/test.php", "/phpinfo.php"});
    leak(c::kLeakGit, {"/.git/HEAD"});
    leak(c::kLeakSvn, {"/.svn/entries"});
    leak(c::kLeakCoreDump, {"/core"});
  }

  if (const auto& dns = f.dns) {
    if (dns->status == DnsStatus::kTimeout ||
        dns->dnssec_signal == DnssecSignal::kUnknown)
      set(c::kDnssec, {Outcome::kError, "resolver gave no answer"});
    else if (dns->dnssec_signal == DnssecSignal::kValidated)
      set(c::kDnssec, Pass("validated"));
    else
      set(c::kDnssec, Fail(std::string(DnssecSignalName(dns->dnssec_signal))));
  }

  if (const auto& tls = f.tls) {
    set(c::kHttpsOffered, tls->https_offered ? Pass("TLS handshake completed")
                                             : Fail("no TLS handshake"));
    set(c::kHttpsRedirect, tls->https_redirect ? Pass("HTTP redirects to HTTPS")
                                               : Fail("no redirect to HTTPS"));
    if (!tls->https_offered) {
      set(c::kCertValid, Fail("no certificate"));
    } else if (tls->cert_valid) {
      set(c::kCertValid, Pass("trusted, matching, not expired"));
    } else {
      std::vector<std::string> why;
      if (!tls->cert_chain_trusted)
        why.push_back("untrusted chain");
      if (!tls->cert_hostname_match)
        why.push_back("hostname mismatch");
      if (!tls->cert_not_expired)
        why.push_back("expired or not yet valid");
      set(c::kCertValid, Fail(Join(why)));
    }
    if (tls->hsts_present && tls->hsts_max_age.value_or(0) > 0)
      set(c::kHsts, Pass("max-age=" + std::to_string(*tls->hsts_max_age)));
    else
      set(c::kHsts, Fail(tls->hsts_present ? "max-age missing or zero"
                                           : "header missing"));
    set(c::kSslv3Disabled,
        ProtocolVerdict(tls->protocols, {TlsProtocol::kSslv3}, "SSLv3"));
    set(c::kLegacyTlsDisabled,
        ProtocolVerdict(tls->protocols,
                        {TlsProtocol::kTls10, TlsProtocol::kTls11},
                        "TLS 1.0/1.1"));
    set(c::kModernTlsOffered, ModernVerdict(tls->protocols));
  }

  // EncMail: not applicable without an MX record.
  bool no_mx = f.dns && f.dns->status != DnsStatus::kTimeout &&
               f.dns->mx_records.empty();
  if (no_mx) {
    for (std::string_view id :
         {c::kMailStarttls, c::kMailCertValid, c::kMailSslv3Disabled,
          c::kMailLegacyTlsDisabled, c::kSpf, c::kDmarc})
      set(id, Neutral("no MX record"));
  } else {
    if (const auto& dns = f.dns; dns && dns->status != DnsStatus::kTimeout) {
      set(c::kSpf, dns->spf_policy == SpfPolicy::kHardFail ||
                           dns->spf_policy == SpfPolicy::kSoftFail
                       ? Pass(dns->spf_record.value_or(""))
                       : Fail(dns->spf_record.value_or("no SPF record")));
      set(c::kDmarc, dns->dmarc_policy == DmarcPolicy::kQuarantine ||
                             dns->dmarc_policy == DmarcPolicy::kReject
                         ? Pass(dns->dmarc_record.value_or(""))
                         : Fail(dns->dmarc_record.value_or("no DMARC record")));
    }
    if (const auto& mail = f.mail; mail && mail->mx_host) {
      const std::string& mx = *mail->mx_host;
      switch (mail->starttls_offered) {
        case Tristate::kYes:
          set(c::kMailStarttls, Pass(mx + " offers STARTTLS"));
          break;
        case Tristate::kNo:
          set(c::kMailStarttls, Fail(mx + " does not offer STARTTLS"));
          break;
        case Tristate::kUnknown:
          set(c::kMailStarttls, {Outcome::kError, mx + " unreachable"});
          break;
      }
      if (mail->starttls_offered == Tristate::kNo) {
        for (std::string_view id : {c::kMailCertValid, c::kMailSslv3Disabled,
                                    c::kMailLegacyTlsDisabled})
          set(id, Neutral("no TLS on " + mx));
      } else {
        if (mail->cert_valid == Tristate::kYes)
          set(c::kMailCertValid, Pass("trusted, matching, not expired"));
        else if (mail->cert_valid == Tristate::kNo)
          set(c::kMailCertValid, Fail("certificate not valid for " + mx));
        set(c::kMailSslv3Disabled,
            ProtocolVerdict(mail->protocols, {TlsProtocol::kSslv3}, "SSLv3"));
        set(c::kMailLegacyTlsDisabled,
            ProtocolVerdict(mail->protocols,
                            {TlsProtocol::kTls10, TlsProtocol::kTls11},
                            "TLS 1.0/1.1"));
      }
    }
  }
  return v;
}

std::string_view ModuleFor(std::string_view id) {
  namespace c = checks;
  if (id == c::kServerLocation)
    return "geo";
  if (id.substr(0, 5) == "leak_")
    return "leak";
  if (id == c::kDnssec || id == c::kSpf || id == c::kDmarc)
    return "dns";
  if (id.substr(0, 5) == "mail_")
    return "mail";
  if (id == c::kHttpsOffered || id == c::kHttpsRedirect ||
      id == c::kCertValid || id == c::kHsts || id == c::kSslv3Disabled ||
      id == c::kLegacyTlsDisabled || id == c::kModernTlsOffered)
    return "tls";
  return "content";
}

}  // namespace

std::vector<CheckResult> EvaluateChecks(const ScanFacts& facts,
                                        const CheckCatalog& catalog) {
  auto verdicts = Evaluate(facts);
  std::vector<CheckResult> out;
  out.reserve(catalog.size());
  for (const CatalogEntry& e : catalog.entries()) {
    CheckResult r;
    r.check_id = e.id;
    r.group = e.group;
    r.critical = e.critical;
    auto it = verdicts.find(e.id);
    Verdict v = it != verdicts.end() ? it->second : Missing(ModuleFor(e.id));
    r.outcome = v.outcome;
    r.evidence = std::move(v.evidence);
    out.push_back(std::move(r));
  }
  return out;
}

Color RateGroup(std::span<const CheckResult> results) {
  if (results.empty())
    throw EmptyGroup("cannot rate a group without check results");
  bool all_pass = true;
  bool all_inconclusive = true;
  for (const CheckResult& r : results) {
    if (r.critical && r.outcome == Outcome::kFail)
      return Color::kRed;
    all_pass &= r.outcome == Outcome::kPass;
    all_inconclusive &=
        r.outcome == Outcome::kNeutral || r.outcome == Outcome::kError;
  }
  if (all_pass)
    return Color::kGreen;
  if (all_inconclusive)
    return Color::kNeutral;
  return Color::kYellow;
}

Color WorstColor(const std::map<CheckGroup, Color>& ratings) {
  Color worst = Color::kGreen;
  for (const auto& [group, color] : ratings)
    worst = std::max(worst, color);
  return worst;
}

SiteRating RateSite(std::string site_ref,
                    std::string url,
                    std::span<const CheckResult> results) {
  SiteRating rating;
  rating.site_ref = std::move(site_ref);
  rating.url = std::move(url);
  for (CheckGroup g : kAllGroups) {
    std::vector<CheckResult> in_group;
    for (const CheckResult& r : results) {
      if (r.group == g)
        in_group.push_back(r);
    }
    if (!in_group.empty())
      rating.group_ratings[g] = RateGroup(in_group);
  }
  rating.overall = WorstColor(rating.group_ratings);
  return rating;
}

bool RanksBefore(const SiteRating& a,
                 const SiteRating& b,
                 const RankingScheme& scheme) {
  for (CheckGroup g : scheme.group_order) {
    auto ca = a.group_ratings.find(g);
    auto cb = b.group_ratings.find(g);
    // A missing rating sorts after every color.
    int va = ca == a.group_ratings.end() ? 4 : static_cast<int>(ca->second);
    int vb = cb == b.group_ratings.end() ? 4 : static_cast<int>(cb->second);
    if (va != vb)
      return va < vb;
  }
  if (a.url != b.url)
    return a.url < b.url;
  return a.site_ref < b.site_ref;
}

std::vector<std::string> RankSites(std::vector<SiteRating> ratings,
                                   const RankingScheme& scheme) {
  std::stable_sort(ratings.begin(), ratings.end(),
                   [&](const SiteRating& a, const SiteRating& b) {
                     return RanksBefore(a, b, scheme);
                   });
  std::vector<std::string> out;
  out.reserve(ratings.size());
  for (const SiteRating& r : ratings)
    out.push_back(r.site_ref);
  return out;
}

ColorCounts AggregateListStats(std::span<const SiteRating> ratings) {
  ColorCounts counts;
  for (CheckGroup g : kAllGroups)
    counts[g] = {0, 0, 0, 0};
  for (const SiteRating& r : ratings) {
    for (const auto& [group, color] : r.group_ratings)
      ++counts[group][static_cast<size_t>(color)];
  }
  return counts;
}

}  // namespace sitebench
