#include "sitebench/token.h"

#include <set>

#include <gtest/gtest.h>

namespace sitebench {
namespace {

TEST(TokenTest, ShapeIs43UrlSafeChars) {
  std::set<std::string> seen;
  for (int i = 0; i < 200; ++i) {
    std::string t = GenerateToken();
    ASSERT_EQ(t.size(), 43u);
    for (char c : t)
      ASSERT_TRUE(std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                  c == '_')
          << t;
    seen.insert(t);
  }
  EXPECT_EQ(seen.size(), 200u);
}

TEST(TokenTest, Base64UrlKnownVectors) {
  // RFC 4648 test vectors, padding removed.
  EXPECT_EQ(Base64UrlEncode(""), "");
  EXPECT_EQ(Base64UrlEncode("f"), "Zg");
  EXPECT_EQ(Base64UrlEncode("fo"), "Zm8");
  EXPECT_EQ(Base64UrlEncode("foobar"), "Zm9vYmFy");
  EXPECT_EQ(Base64UrlEncode("\xfb\xff"), "-_8");
}

TEST(TokenTest, HashVerifies) {
  std::string token = GenerateToken();
  std::string hash = HashToken(token);
  EXPECT_EQ(hash.find(token), std::string::npos);
  EXPECT_TRUE(VerifyToken(token, hash));
  EXPECT_FALSE(VerifyToken(token + "x", hash));
  EXPECT_FALSE(VerifyToken("", hash));
  EXPECT_NE(HashToken(token), hash);  // fresh salt
}

TEST(TokenTest, KnownDigest) {
  // sha256("saltabc") computed with Python hashlib.
  EXPECT_TRUE(VerifyToken(
      "abc",
      "sha256$salt$"
      "3681099918be28c95b81e27e7e5c2e4c6a6dea566d2d10e7f49139ebb779eb6f"));
}

TEST(TokenTest, MalformedStoredHashNeverVerifies) {
  for (const char* stored : {"", "sha256", "sha256$", "md5$a$b", "plain"})
    EXPECT_FALSE(VerifyToken("abc", stored)) << stored;
}

}  // namespace
}  // namespace sitebench
