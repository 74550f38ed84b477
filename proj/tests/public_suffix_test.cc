#include "sitebench/public_suffix.h"

#include <gtest/gtest.h>

namespace sitebench {
namespace {

const char kRules[] = R"(// snapshot
com
org
co.uk
*.ck
!www.ck
github.io
)";

TEST(PublicSuffixTest, PlainRules) {
  auto psl = PublicSuffixList::Parse(kRules);
  EXPECT_EQ("com", psl.PublicSuffix("www.example.com"));
  EXPECT_EQ("example.com", psl.RegistrableDomain("a.b.example.com"));
  EXPECT_EQ("example.co.uk", psl.RegistrableDomain("shop.example.co.uk"));
  EXPECT_EQ("alice.github.io", psl.RegistrableDomain("x.alice.github.io"));
}

TEST(PublicSuffixTest, WildcardAndException) {
  auto psl = PublicSuffixList::Parse(kRules);
  EXPECT_EQ("foo.ck", psl.PublicSuffix("a.foo.ck"));
  EXPECT_EQ("a.foo.ck", psl.RegistrableDomain("b.a.foo.ck"));
  EXPECT_EQ("ck", psl.PublicSuffix("www.ck"));
  EXPECT_EQ("www.ck", psl.RegistrableDomain("www.ck"));
}

TEST(PublicSuffixTest, UnlistedTldFallsBackToLastLabel) {
  auto psl = PublicSuffixList::Parse(kRules);
  EXPECT_EQ("test", psl.PublicSuffix("t.tracker.test"));
  EXPECT_EQ("tracker.test", psl.RegistrableDomain("t.tracker.test"));
}

TEST(PublicSuffixTest, SuffixesAndIpsMapToThemselves) {
  auto psl = PublicSuffixList::Parse(kRules);
  EXPECT_EQ("co.uk", psl.RegistrableDomain("co.uk"));
  EXPECT_EQ("127.0.0.1", psl.RegistrableDomain("127.0.0.1"));
  EXPECT_EQ("::1", psl.RegistrableDomain("::1"));
}

TEST(PublicSuffixTest, CaseInsensitive) {
  auto psl = PublicSuffixList::Parse(kRules);
  EXPECT_TRUE(psl.SameRegistrableDomain("CDN.Example.org", "example.org"));
  EXPECT_FALSE(psl.SameRegistrableDomain("t.other.net", "example.org"));
}

TEST(PublicSuffixTest, BundledSnapshotLoads) {
  auto psl = PublicSuffixList::LoadFile(std::string(SITEBENCH_DATA_DIR) +
                                        "/signatures/public_suffix.dat");
  EXPECT_GT(psl.size(), 10u);
  EXPECT_EQ("example.co.uk", psl.RegistrableDomain("www.example.co.uk"));
}

}  // namespace
}  // namespace sitebench
