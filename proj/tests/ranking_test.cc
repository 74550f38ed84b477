#include "sitebench/ranking.h"

#include <random>

#include <gtest/gtest.h>

#include "support/ranking_fixture.h"

namespace sitebench {
namespace {

namespace c = checks;

CheckResult R(Outcome o, bool critical = false) {
  return {"x", CheckGroup::kAttacks, o, critical, ""};
}

TEST(RateGroupTest, Rules) {
  using O = Outcome;
  EXPECT_EQ(RateGroup(std::vector{R(O::kPass), R(O::kPass, true)}),
            Color::kGreen);
  EXPECT_EQ(RateGroup(std::vector{R(O::kPass), R(O::kFail, true)}),
            Color::kRed);
  EXPECT_EQ(RateGroup(std::vector{R(O::kPass), R(O::kFail)}), Color::kYellow);
  EXPECT_EQ(RateGroup(std::vector{R(O::kNeutral), R(O::kError)}),
            Color::kNeutral);
  EXPECT_EQ(RateGroup(std::vector{R(O::kPass), R(O::kNeutral)}),
            Color::kYellow);
  EXPECT_EQ(RateGroup(std::vector{R(O::kError, true), R(O::kPass)}),
            Color::kYellow);
  EXPECT_THROW(RateGroup(std::vector<CheckResult>{}), EmptyGroup);
}

TEST(RateGroupProperty, RedIffCriticalFailGreenIffAllPass) {
  std::mt19937 rng(3);
  for (int i = 0; i < 5000; ++i) {
    std::vector<CheckResult> results;
    size_t n = 1 + rng() % 8;
    bool critical_fail = false;
    bool all_pass = true;
    for (size_t k = 0; k < n; ++k) {
      CheckResult r = R(static_cast<Outcome>(rng() % 4), rng() % 3 == 0);
      critical_fail |= r.critical && r.outcome == Outcome::kFail;
      all_pass &= r.outcome == Outcome::kPass;
      results.push_back(r);
    }
    Color color = RateGroup(results);
    EXPECT_EQ(color == Color::kRed, critical_fail);
    EXPECT_EQ(color == Color::kGreen, all_pass);
    std::shuffle(results.begin(), results.end(), rng);
    EXPECT_EQ(RateGroup(results), color);
  }
}

TEST(RateSiteTest, OverallIsWorstGroup) {
  std::vector<CheckResult> results = {
      {"a", CheckGroup::kNoTrack, Outcome::kPass, false, ""},
      {"b", CheckGroup::kAttacks, Outcome::kFail, false, ""},
      {"c", CheckGroup::kEncWeb, Outcome::kNeutral, false, ""},
  };
  SiteRating r = RateSite("s", "https://s.test/", results);
  EXPECT_EQ(r.group_ratings.size(), 3u);
  EXPECT_EQ(r.group_ratings[CheckGroup::kNoTrack], Color::kGreen);
  EXPECT_EQ(r.group_ratings[CheckGroup::kAttacks], Color::kYellow);
  EXPECT_EQ(r.group_ratings[CheckGroup::kEncWeb], Color::kNeutral);
  EXPECT_EQ(r.overall, Color::kNeutral);
}

TEST(RankSitesTest, SixSiteFixtureAgainstOracle) {
  std::vector<SiteRating> sites = testing::SixSiteFixture();
  RankingScheme scheme;
  EXPECT_EQ(RankSites(sites, scheme),
            (std::vector<std::string>{"d", "a", "f", "c", "e", "b"}));
  scheme = ParseGroupOrder("EncWeb,NoTrack,Attacks,EncMail");
  EXPECT_EQ(RankSites(sites, scheme),
            (std::vector<std::string>{"a", "e", "b", "f", "c", "d"}));
  for (const auto& order : testing::AllGroupOrders()) {
    scheme.group_order = order;
    EXPECT_EQ(RankSites(sites, scheme), testing::OracleRanking(sites, order))
        << FormatGroupOrder(scheme);
  }
}

SiteRating RandomRating(std::mt19937& rng, int index) {
  SiteRating r;
  r.site_ref = "s" + std::to_string(index);
  r.url = "https://h" + std::to_string(rng() % 5) + ".test/";
  for (CheckGroup g : kAllGroups) {
    if (rng() % 6 != 0)
      r.group_ratings[g] = static_cast<Color>(rng() % 4);
  }
  r.overall = WorstColor(r.group_ratings);
  return r;
}

TEST(RankSitesProperty, MatchesOracleAndIgnoresInputOrder) {
  std::mt19937 rng(5);
  auto orders = testing::AllGroupOrders();
  for (int round = 0; round < 300; ++round) {
    std::vector<SiteRating> sites;
    int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i)
      sites.push_back(RandomRating(rng, i));
    RankingScheme scheme;
    scheme.group_order = orders[rng() % orders.size()];
    std::vector<std::string> ranked = RankSites(sites, scheme);
    EXPECT_EQ(ranked, testing::OracleRanking(sites, scheme.group_order));
    std::shuffle(sites.begin(), sites.end(), rng);
    EXPECT_EQ(RankSites(sites, scheme), ranked);
  }
}

TEST(AggregateListStatsTest, CountsPerGroup) {
  std::vector<SiteRating> sites = testing::SixSiteFixture();
  ColorCounts counts = AggregateListStats(sites);
  EXPECT_EQ(counts[CheckGroup::kNoTrack], (std::array<int, 4>{2, 2, 1, 1}));
  EXPECT_EQ(counts[CheckGroup::kEncMail], (std::array<int, 4>{1, 3, 1, 0}));
  for (CheckGroup g : kAllGroups) {
    int rated = 0;
    for (const SiteRating& s : sites)
      rated += s.group_ratings.count(g) ? 1 : 0;
    const auto& row = counts[g];
    EXPECT_EQ(row[0] + row[1] + row[2] + row[3], rated);
  }
}

// --- check evaluation -----------------------------------------------------

const CheckResult& Find(const std::vector<CheckResult>& results,
                        std::string_view id) {
  for (const CheckResult& r : results) {
    if (r.check_id == id)
      return r;
  }
  ADD_FAILURE() << "missing " << id;
  static CheckResult none;
  return none;
}

TEST(EvaluateChecksTest, MissingBundlesYieldErrorsInCatalogOrder) {
  std::vector<CheckResult> results = EvaluateChecks(ScanFacts{});
  const auto& entries = CheckCatalog::Default().entries();
  ASSERT_EQ(results.size(), entries.size());
  for (size_t i = 0; i < entries.size(); ++i) {
    EXPECT_EQ(results[i].check_id, entries[i].id);
    EXPECT_EQ(results[i].group, entries[i].group);
    EXPECT_EQ(results[i].critical, entries[i].critical);
    EXPECT_EQ(results[i].outcome, Outcome::kError) << entries[i].id;
    EXPECT_NE(results[i].evidence.find("scan unavailable"), std::string::npos);
  }
}

TEST(EvaluateChecksTest, ContentRules) {
  ScanFacts facts;
  ContentFacts& content = facts.content.emplace();
  content.final_url = "http://site.test/";
  content.mixed_content_urls = {};
  content.security_headers["X-XSS-Protection"] = "0";
  content.security_headers["X-Frame-Options"] = "ALLOW-FROM x";
  content.security_headers["X-Content-Type-Options"] = "nosniff";
  content.server_banner = "nginx/1.18.0";
  content.generator = "Hugo";
  content.script_libs = {{"jquery", "3.7.1", "3.7.1"},
                         {"lodash", "4.17.4", "4.17.21"}};
  auto results = EvaluateChecks(facts);
  EXPECT_EQ(Find(results, c::kMixedContent).outcome, Outcome::kNeutral);
  EXPECT_EQ(Find(results, c::kHeaderXssProtection).outcome, Outcome::kFail);
  EXPECT_EQ(Find(results, c::kHeaderFrameOptions).outcome, Outcome::kFail);
  EXPECT_EQ(Find(results, c::kHeaderContentTypeOptions).outcome,
            Outcome::kPass);
  EXPECT_EQ(Find(results, c::kHeaderCsp).outcome, Outcome::kFail);
  EXPECT_EQ(Find(results, c::kServerVersionBanner).outcome, Outcome::kFail);
  EXPECT_EQ(Find(results, c::kCmsGenerator).outcome, Outcome::kPass);
  const CheckResult& libs = Find(results, c::kOutdatedLibs);
  EXPECT_EQ(libs.outcome, Outcome::kFail);
  EXPECT_NE(libs.evidence.find("lodash"), std::string::npos);
}

TEST(EvaluateChecksTest, ServerLocation) {
  ScanFacts facts;
  facts.geo.emplace();
  auto outcome = [&] {
    return Find(EvaluateChecks(facts), c::kServerLocation).outcome;
  };
  EXPECT_EQ(outcome(), Outcome::kNeutral);
  facts.geo->locations = {{ServerRole::kWeb, "a", "192.0.2.1", "DE"},
                          {ServerRole::kMail, "m", "192.0.2.2", std::nullopt}};
  EXPECT_EQ(outcome(), Outcome::kPass);
  facts.geo->locations.push_back({ServerRole::kNs, "n", "192.0.2.3", "US"});
  EXPECT_EQ(outcome(), Outcome::kFail);
}

TEST(EvaluateChecksTest, TlsRules) {
  ScanFacts facts;
  TlsFacts& tls = facts.tls.emplace();
  tls.https_offered = true;
  tls.hsts_present = true;
  tls.hsts_max_age = 0;
  tls.protocols[TlsProtocol::kTls12] = ProtocolSupport::kOffered;
  tls.protocols[TlsProtocol::kTls11] = ProtocolSupport::kRefused;
  tls.protocols[TlsProtocol::kTls10] = ProtocolSupport::kUnknown;
  tls.protocols[TlsProtocol::kSslv3] = ProtocolSupport::kRefused;
  auto results = EvaluateChecks(facts);
  EXPECT_EQ(Find(results, c::kHsts).outcome, Outcome::kFail);
  EXPECT_EQ(Find(results, c::kModernTlsOffered).outcome, Outcome::kPass);
  EXPECT_EQ(Find(results, c::kLegacyTlsDisabled).outcome, Outcome::kNeutral);
  EXPECT_EQ(Find(results, c::kSslv3Disabled).outcome, Outcome::kPass);
  EXPECT_EQ(Find(results, c::kCertValid).outcome, Outcome::kFail);
}

TEST(EvaluateChecksTest, MailWithoutMxIsNeutral) {
  ScanFacts facts;
  facts.dns.emplace();
  facts.dns->dnssec_signal = DnssecSignal::kValidated;
  facts.mail.emplace();
  auto results = EvaluateChecks(facts);
  for (const CatalogEntry* e :
       CheckCatalog::Default().InGroup(CheckGroup::kEncMail))
    EXPECT_EQ(Find(results, e->id).outcome, Outcome::kNeutral) << e->id;
  EXPECT_EQ(Find(results, c::kDnssec).outcome, Outcome::kPass);
  SiteRating rating = RateSite("s", "u", results);
  EXPECT_EQ(rating.group_ratings[CheckGroup::kEncMail], Color::kNeutral);
}

TEST(EvaluateChecksTest, MailPolicies) {
  ScanFacts facts;
  facts.dns.emplace();
  facts.dns->mx_records = {{10, "mx.site.test"}};
  facts.dns->spf_policy = SpfPolicy::kSoftFail;
  facts.dns->dmarc_policy = DmarcPolicy::kNone;
  facts.mail.emplace();
  facts.mail->mx_host = "mx.site.test";
  facts.mail->starttls_offered = Tristate::kNo;
  auto results = EvaluateChecks(facts);
  EXPECT_EQ(Find(results, c::kSpf).outcome, Outcome::kPass);
  EXPECT_EQ(Find(results, c::kDmarc).outcome, Outcome::kFail);
  EXPECT_EQ(Find(results, c::kMailStarttls).outcome, Outcome::kFail);
  EXPECT_EQ(Find(results, c::kMailCertValid).outcome, Outcome::kNeutral);
  EXPECT_EQ(RateSite("s", "u", results).group_ratings[CheckGroup::kEncMail],
            Color::kRed);
}

}  // namespace
}  // namespace sitebench
