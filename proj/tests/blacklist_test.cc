#include "sitebench/blacklist.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

namespace sitebench {
namespace {

namespace fs = std::filesystem;

TEST(BlacklistTest, HostEntriesCoverSubdomains) {
  Blacklist bl;
  EXPECT_TRUE(bl.Add("Example.ORG.", "owner request"));
  EXPECT_TRUE(bl.Match("https://example.org/"));
  EXPECT_TRUE(bl.Match("http://www.example.org/x"));
  EXPECT_TRUE(bl.Match("shop.example.org"));
  EXPECT_FALSE(bl.Match("https://notexample.org/"));
  EXPECT_FALSE(bl.Match("https://example.org.evil.test/"));
  EXPECT_EQ(bl.Match("https://example.org/")->note, "owner request");
}

TEST(BlacklistTest, UrlPrefixEntries) {
  Blacklist bl;
  bl.Add("https://uni.example/~alice", "");
  EXPECT_TRUE(bl.Match("https://uni.example/~alice/"));
  EXPECT_TRUE(bl.Match("https://UNI.example:443/~alice/page"));
  EXPECT_FALSE(bl.Match("https://uni.example/~bob/"));
  EXPECT_FALSE(bl.Match("http://uni.example/~alice/"));
  EXPECT_FALSE(bl.Match("uni.example"));
}

TEST(BlacklistTest, DuplicateAddIsIdempotent) {
  Blacklist bl;
  EXPECT_TRUE(bl.Add("a.example", "first"));
  EXPECT_FALSE(bl.Add("A.example", "second"));
  ASSERT_EQ(bl.entries().size(), 1u);
  EXPECT_EQ(bl.entries()[0].note, "first");
}

TEST(BlacklistTest, RejectsMalformedPatterns) {
  Blacklist bl;
  EXPECT_THROW(bl.Add("", ""), BlacklistError);
  EXPECT_THROW(bl.Add("  ", ""), BlacklistError);
  EXPECT_THROW(bl.Add("a.example/path", ""), BlacklistError);
  EXPECT_THROW(bl.Add("ftp://a.example/", ""), BlacklistError);
}

class BlacklistFileTest : public ::testing::Test {
 protected:
  void SetUp() override {
    char tmpl[] = "/tmp/blacklist-XXXXXX";
    dir_ = mkdtemp(tmpl);
    path_ = dir_ / "blacklist.tsv";
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  fs::path path_;
};

TEST_F(BlacklistFileTest, PersistsAcrossInstances) {
  TimePoint t = FromUnixSeconds(1792139400);
  {
    Blacklist bl(path_);
    EXPECT_TRUE(bl.entries().empty());
    bl.Add("a.example", "tab\there", t);
    bl.Add("https://b.example/x", "", t);
  }
  Blacklist reloaded(path_);
  auto entries = reloaded.entries();
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].pattern, "a.example");
  EXPECT_EQ(entries[0].note, "tab here");
  EXPECT_EQ(entries[0].added_at, t);
  EXPECT_EQ(entries[1].pattern, "https://b.example/x");
  EXPECT_TRUE(reloaded.Match("https://b.example/x/y"));
}

TEST_F(BlacklistFileTest, RefreshSeesExternalWrites) {
  Blacklist server(path_);
  Blacklist cli(path_);
  cli.Add("late.example", "");
  // Coarse file timestamps could hide the change; force a distinct mtime.
  fs::last_write_time(path_,
                      fs::last_write_time(path_) + std::chrono::hours(1));
  EXPECT_FALSE(server.Match("late.example"));
  server.Refresh();
  EXPECT_TRUE(server.Match("late.example"));
}

TEST_F(BlacklistFileTest, MalformedFileThrows) {
  std::ofstream(path_) << "a.example\tyesterday\tnote\n";
  EXPECT_THROW(Blacklist{path_}, BlacklistError);
}

}  // namespace
}  // namespace sitebench
