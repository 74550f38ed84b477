#include "sitebench/token.h"

#include <stdexcept>
#include <vector>

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

namespace sitebench {

namespace {

std::string RandomBytes(size_t n) {
  std::string out(n, '\0');
  if (RAND_bytes(reinterpret_cast<unsigned char*>(out.data()),
                 static_cast<int>(n)) != 1)
    throw std::runtime_error("RAND_bytes failed");
  return out;
}

std::string Hex(std::string_view bytes) {
  static const char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out += kDigits[c >> 4];
    out += kDigits[c & 15];
  }
  return out;
}

std::string Sha256Hex(std::string_view salt, std::string_view token) {
  std::string input = std::string(salt) + std::string(token);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(input.data(), input.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1)
    throw std::runtime_error("EVP_Digest failed");
  return Hex(std::string_view(reinterpret_cast<char*>(digest), len));
}

}  // namespace

std::string Base64UrlEncode(std::string_view bytes) {
  std::vector<unsigned char> buf(4 * ((bytes.size() + 2) / 3) + 1);
  int n = EVP_EncodeBlock(buf.data(),
                          reinterpret_cast<const unsigned char*>(bytes.data()),
                          static_cast<int>(bytes.size()));
  std::string out(reinterpret_cast<char*>(buf.data()), n);
  while (!out.empty() && out.back() == '=')
    out.pop_back();
  for (char& c : out) {
    if (c == '+')
      c = '-';
    else if (c == '/')
      c = '_';
  }
  return out;
}

std::string RandomHexId(size_t bytes) {
  return Hex(RandomBytes(bytes));
}

std::string GenerateToken() {
  return Base64UrlEncode(RandomBytes(32));
}

std::string HashToken(std::string_view token) {
  std::string salt = Hex(RandomBytes(16));
  return "sha256$" + salt + "$" + Sha256Hex(salt, token);
}

bool VerifyToken(std::string_view token, std::string_view stored) {
  constexpr std::string_view kPrefix = "sha256$";
  if (stored.substr(0, kPrefix.size()) != kPrefix)
    return false;
  stored.remove_prefix(kPrefix.size());
  auto dollar = stored.find('$');
  if (dollar == std::string_view::npos)
    return false;
  std::string_view salt = stored.substr(0, dollar);
  std::string_view expected = stored.substr(dollar + 1);
  std::string actual = Sha256Hex(salt, token);
  return actual.size() == expected.size() &&
         CRYPTO_memcmp(actual.data(), expected.data(), actual.size()) == 0;
}

}  // namespace sitebench
