#ifndef SITEBENCH_TOKEN_H_
#define SITEBENCH_TOKEN_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace sitebench {

// 32 random bytes as unpadded base64url (43 characters).
std::string GenerateToken();

// "sha256$<salt hex>$<digest hex>" over salt || token with a fresh 16-byte
// salt.
std::string HashToken(std::string_view token);

// Constant-time comparison against a HashToken() result. False for any
// malformed |stored|.
bool VerifyToken(std::string_view token, std::string_view stored);

std::string Base64UrlEncode(std::string_view bytes);

// Random identifier of |bytes| random bytes in lowercase hex.
std::string RandomHexId(size_t bytes = 8);

}  // namespace sitebench

#endif  // SITEBENCH_TOKEN_H_
