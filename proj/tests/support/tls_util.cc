#include "support/tls_util.h"

#include <chrono>
#include <thread>

#include <poll.h>
#include <sys/socket.h>

namespace sitebench::testing {

SslCtxPtr MakeServerCtx(const TlsConfig& config) {
  SslCtxPtr ctx(SSL_CTX_new(TLS_server_method()));
  SSL_CTX_set_security_level(ctx.get(), 0);
  SSL_CTX_set_cipher_list(ctx.get(), "ALL:@SECLEVEL=0");
  SSL_CTX_set_min_proto_version(ctx.get(), config.min_version);
  SSL_CTX_set_max_proto_version(ctx.get(), config.max_version);
  if (config.cert.cert) {
    SSL_CTX_use_certificate(ctx.get(), config.cert.cert.get());
    SSL_CTX_use_PrivateKey(ctx.get(), config.cert.key.get());
  }
  return ctx;
}

std::optional<ClientHelloInfo> PeekClientHello(int fd) {
  std::string buf(16384 + 5, '\0');
  size_t have = 0;
  for (int attempt = 0; attempt < 200; ++attempt) {
    pollfd p{fd, POLLIN, 0};
    if (::poll(&p, 1, 50) < 0)
      return std::nullopt;
    ssize_t n = ::recv(fd, buf.data(), buf.size(), MSG_PEEK | MSG_DONTWAIT);
    if (n == 0)
      return std::nullopt;
    if (n > 0) {
      have = static_cast<size_t>(n);
      if (have >= 5) {
        if (static_cast<uint8_t>(buf[0]) != 0x16)
          return std::nullopt;
        size_t len =
            static_cast<uint8_t>(buf[3]) << 8 | static_cast<uint8_t>(buf[4]);
        if (have >= 5 + len)
          break;
      }
    }
  }
  if (have < 5 + 4 + 2 + 32 + 1)
    return std::nullopt;
  auto u8 = [&](size_t i) { return static_cast<uint8_t>(buf[i]); };
  size_t end = 5 + (u8(3) << 8 | u8(4));
  if (u8(5) != 0x01)
    return std::nullopt;
  ClientHelloInfo info;
  info.client_version = static_cast<uint16_t>(u8(9) << 8 | u8(10));
  size_t pos = 11 + 32;
  auto skip = [&](size_t len_bytes) {
    if (pos + len_bytes > end)
      return false;
    size_t len = len_bytes == 1 ? u8(pos) : (u8(pos) << 8 | u8(pos + 1));
    pos += len_bytes + len;
    return pos <= end;
  };
  if (!skip(1) || !skip(2) || !skip(1))
    return info;
  if (pos + 2 > end)
    return info;
  size_t ext_end = pos + 2 + (u8(pos) << 8 | u8(pos + 1));
  pos += 2;
  while (pos + 4 <= std::min(ext_end, end)) {
    uint16_t type = static_cast<uint16_t>(u8(pos) << 8 | u8(pos + 1));
    size_t len = u8(pos + 2) << 8 | u8(pos + 3);
    size_t body = pos + 4;
    if (type == 0 && body + 5 <= end) {
      size_t name_len = u8(body + 3) << 8 | u8(body + 4);
      if (body + 5 + name_len <= end)
        info.sni = buf.substr(body + 5, name_len);
    }
    pos = body + len;
  }
  return info;
}

void AnswerSslv3(int fd, bool offer) {
  // Consume the hello first.
  char sink[4096];
  ::recv(fd, sink, sizeof sink, MSG_DONTWAIT);
  if (!offer) {
    static const char kAlert[] = {0x15, 0x03, 0x00, 0x00, 0x02, 0x02, 0x46};
    SendAll(fd, std::string_view(kAlert, sizeof kAlert));
    return;
  }
  std::string hello;
  hello += std::string{0x03, 0x00};
  hello.append(32, '\x42');
  hello += '\0';                     // session id
  hello += std::string{0x00, 0x2f};  // TLS_RSA_WITH_AES_128_CBC_SHA
  hello += '\0';                     // compression
  std::string hs = "\x02";
  hs += '\0';
  hs += '\0';
  hs += static_cast<char>(hello.size());
  hs += hello;
  std::string record{0x16, 0x03, 0x00, 0x00};
  record += static_cast<char>(hs.size());
  SendAll(fd, record + hs);
}

}  // namespace sitebench::testing
