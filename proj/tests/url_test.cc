#include "sitebench/url.h"

#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace sitebench {
namespace {

TEST(NormalizeUrlTest, DefaultsSchemeAndLowercasesHost) {
  EXPECT_EQ("https://example.org/", NormalizeUrl("EXAMPLE.org"));
}

TEST(NormalizeUrlTest, StripsDefaultPortAndFragment) {
  EXPECT_EQ("http://example.org/a",
            NormalizeUrl("http://example.org:80/a#frag"));
  EXPECT_EQ("https://example.org/", NormalizeUrl("https://example.org:443"));
}

TEST(NormalizeUrlTest, KeepsNonDefaultPortPathAndQuery) {
  EXPECT_EQ("http://example.org:8080/A/b?x=1",
            NormalizeUrl("  HTTP://Example.ORG:8080/A/b?x=1  "));
  EXPECT_EQ("https://example.org/?q", NormalizeUrl("example.org?q"));
}

TEST(NormalizeUrlTest, RejectsMalformed) {
  EXPECT_THROW(NormalizeUrl("ht!tp://"), MalformedUrl);
  EXPECT_THROW(NormalizeUrl(""), MalformedUrl);
  EXPECT_THROW(NormalizeUrl("ftp://example.org/"), MalformedUrl);
  EXPECT_THROW(NormalizeUrl("http://exa mple.org/"), MalformedUrl);
  EXPECT_THROW(NormalizeUrl("http://example.org:99999/"), MalformedUrl);
  EXPECT_THROW(NormalizeUrl("http://user@example.org/"), MalformedUrl);
  EXPECT_THROW(NormalizeUrl("http://a..b/"), MalformedUrl);
}

TEST(NormalizeUrlTest, HostOnlyWithPathContainingScheme) {
  EXPECT_EQ("https://example.org/r?u=http://x",
            NormalizeUrl("example.org/r?u=http://x"));
}

TEST(NormalizeUrlTest, IsIdempotent) {
  std::mt19937 rng(7);
  const std::vector<std::string> schemes = {"", "http://", "https://",
                                            "HTTPS://", "//"};
  const std::vector<std::string> hosts = {"Example.org", "a.b.C", "x-y.test",
                                          "127.0.0.1",   "[::1]", "host."};
  const std::vector<std::string> ports = {"", ":80", ":443", ":8080"};
  const std::vector<std::string> paths = {"",   "/",    "/a/B", "/p?q=1",
                                          "?x", "/a#f", "/%20"};
  for (int i = 0; i < 2000; ++i) {
    std::string raw = schemes[rng() % schemes.size()] +
                      hosts[rng() % hosts.size()] +
                      ports[rng() % ports.size()] + paths[rng() % paths.size()];
    std::string once;
    try {
      once = NormalizeUrl(raw);
    } catch (const MalformedUrl&) {
      continue;
    }
    EXPECT_EQ(once, NormalizeUrl(once)) << raw;
  }
}

TEST(ResolveReferenceTest, HandlesReferenceForms) {
  auto base = *ParseUrl("https://site.test/dir/page.html?x=1");
  EXPECT_EQ("https://cdn.test/a.js",
            ResolveReference(base, "https://cdn.test/a.js"));
  EXPECT_EQ("https://cdn.test/a.js", ResolveReference(base, "//cdn.test/a.js"));
  EXPECT_EQ("https://site.test/a.js", ResolveReference(base, "/a.js"));
  EXPECT_EQ("https://site.test/dir/a.js", ResolveReference(base, "a.js"));
  EXPECT_EQ("https://site.test/a.js", ResolveReference(base, "../a.js"));
  EXPECT_EQ("https://site.test/dir/page.html?y", ResolveReference(base, "?y"));
  EXPECT_FALSE(ResolveReference(base, "data:image/png;base64,AA"));
  EXPECT_FALSE(ResolveReference(base, "javascript:void(0)"));
  EXPECT_FALSE(ResolveReference(base, "#top"));
}

TEST(UrlPartsTest, OriginAndEffectivePort) {
  auto parts = *ParseUrl("http://Site.test:8080/x");
  EXPECT_EQ("http://site.test:8080", parts.Origin());
  EXPECT_EQ(8080, parts.EffectivePort());
  EXPECT_EQ(443, ParseUrl("https://a.test/")->EffectivePort());
}

}  // namespace
}  // namespace sitebench
