#include "sitebench/catalog.h"

#include <set>

#include <gtest/gtest.h>

namespace sitebench {
namespace {

void ExpectEntry(std::string_view id, CheckGroup group, bool critical) {
  const CatalogEntry* e = CheckCatalog::Default().Find(id);
  ASSERT_NE(nullptr, e) << id;
  EXPECT_EQ(group, e->group) << id;
  EXPECT_EQ(critical, e->critical) << id;
}

TEST(CheckCatalogTest, ContainsNamedChecks) {
  ExpectEntry("third_party_trackers", CheckGroup::kNoTrack, true);
  ExpectEntry("leak_server_status", CheckGroup::kAttacks, true);
  ExpectEntry("mail_starttls", CheckGroup::kEncMail, true);
}

TEST(CheckCatalogTest, CriticalSetMatchesPolicy) {
  std::set<std::string> critical;
  for (const CatalogEntry& e : CheckCatalog::Default().entries()) {
    if (e.critical)
      critical.insert(e.id);
  }
  std::set<std::string> expected = {
      "third_party_trackers", "https_offered",       "https_redirect",
      "cert_valid",           "mail_starttls",       "leak_server_status",
      "leak_test_scripts",    "leak_git_repository", "leak_svn_repository",
      "leak_core_dump"};
  EXPECT_EQ(expected, critical);
}

TEST(CheckCatalogTest, PartitionsChecksIntoFourGroups) {
  const CheckCatalog& catalog = CheckCatalog::Default();
  std::set<std::string> ids;
  size_t total = 0;
  for (CheckGroup g : kAllGroups) {
    auto in_group = catalog.InGroup(g);
    EXPECT_FALSE(in_group.empty()) << GroupName(g);
    for (const CatalogEntry* e : in_group) {
      EXPECT_TRUE(ids.insert(e->id).second) << e->id;
      ++total;
    }
  }
  EXPECT_EQ(catalog.size(), total);
  EXPECT_EQ(34u, total);
}

TEST(CheckCatalogTest, ConfigOverridesCriticality) {
  auto catalog = CheckCatalog::Parse(
      "# local policy\n"
      "hsts\tEncWeb\tcritical\n"
      "cert_valid\tEncWeb\tnormal\n");
  EXPECT_TRUE(catalog.Find("hsts")->critical);
  EXPECT_FALSE(catalog.Find("cert_valid")->critical);
  EXPECT_TRUE(catalog.Find("https_offered")->critical);
}

TEST(CheckCatalogTest, SerializeParsesBackToSameCatalog) {
  auto catalog = CheckCatalog::Parse(CheckCatalog::Default().Serialize());
  EXPECT_EQ(CheckCatalog::Default().Serialize(), catalog.Serialize());
}

TEST(CheckCatalogTest, ShippedFileMatchesDefault) {
  auto shipped =
      CheckCatalog::LoadFile(std::string(SITEBENCH_DATA_DIR) + "/catalog.tsv");
  EXPECT_EQ(CheckCatalog::Default().Serialize(), shipped.Serialize())
      << "regenerate with: sitebench catalog > data/catalog.tsv";
}

TEST(CheckCatalogTest, RejectsBadConfig) {
  EXPECT_THROW(CheckCatalog::Parse("nope\tEncWeb\tnormal\n"), CatalogError);
  EXPECT_THROW(CheckCatalog::Parse("hsts\tWeb\tnormal\n"), CatalogError);
  EXPECT_THROW(CheckCatalog::Parse("hsts\tEncWeb\tmaybe\n"), CatalogError);
  EXPECT_THROW(CheckCatalog::Parse("hsts EncWeb normal\n"), CatalogError);
  EXPECT_THROW(
      CheckCatalog::Parse("hsts\tEncWeb\tnormal\nhsts\tEncWeb\tnormal\n"),
      CatalogError);
  std::string empty_mail;
  for (const CatalogEntry* e :
       CheckCatalog::Default().InGroup(CheckGroup::kEncMail))
    empty_mail += e->id + "\tEncWeb\tnormal\n";
  EXPECT_THROW(CheckCatalog::Parse(empty_mail), CatalogError);
}

}  // namespace
}  // namespace sitebench
