#include "sitebench/tls_scanner.h"

#include <cctype>
#include <cstring>
#include <ctime>

#include <openssl/err.h>
#include <openssl/rand.h>
#include <openssl/x509v3.h>

#include "sitebench/url.h"

namespace sitebench {

namespace {

int OpenSslVersion(TlsProtocol p) {
  switch (p) {
    case TlsProtocol::kSslv3:
      return SSL3_VERSION;
    case TlsProtocol::kTls10:
      return TLS1_VERSION;
    case TlsProtocol::kTls11:
      return TLS1_1_VERSION;
    case TlsProtocol::kTls12:
      return TLS1_2_VERSION;
    case TlsProtocol::kTls13:
      return TLS1_3_VERSION;
  }
  return 0;
}

struct Handshake {
  bool connected = false;  // TCP (and STARTTLS) succeeded
  bool ok = false;
  SslPtr ssl;
  bool chain_trusted = false;
  bool hostname_match = false;
  bool not_expired = false;
};

SslCtxPtr MakeClientCtx(std::optional<TlsProtocol> only,
                        const std::string& trust_store) {
  SslCtxPtr ctx(SSL_CTX_new(TLS_client_method()));
  if (!ctx)
    return ctx;
  // Legacy protocols need the weakest security level to negotiate at all.
  SSL_CTX_set_security_level(ctx.get(), 0);
  SSL_CTX_set_cipher_list(ctx.get(), "ALL:@SECLEVEL=0");
  int lo = only ? OpenSslVersion(*only) : TLS1_VERSION;
  int hi = only ? OpenSslVersion(*only) : TLS1_3_VERSION;
  SSL_CTX_set_min_proto_version(ctx.get(), lo);
  SSL_CTX_set_max_proto_version(ctx.get(), hi);
  SSL_CTX_set_verify(ctx.get(), SSL_VERIFY_NONE, nullptr);
  LoadTrustStore(ctx.get(), trust_store);
  // Expiry is reported separately from chain trust.
  X509_VERIFY_PARAM_set_flags(SSL_CTX_get0_param(ctx.get()),
                              X509_V_FLAG_NO_CHECK_TIME);
  return ctx;
}

void InspectCertificate(SSL* ssl, std::string_view host, Handshake& hs) {
  X509Ptr cert(SSL_get1_peer_certificate(ssl));
  if (!cert)
    return;
  hs.chain_trusted = SSL_get_verify_result(ssl) == X509_V_OK;
  std::string h(host);
  if (IsIpLiteral(h))
    hs.hostname_match = X509_check_ip_asc(cert.get(), h.c_str(), 0) == 1;
  else
    hs.hostname_match =
        X509_check_host(cert.get(), h.data(), h.size(), 0, nullptr) == 1;
  hs.not_expired = X509_cmp_current_time(X509_get0_notBefore(cert.get())) < 0 &&
                   X509_cmp_current_time(X509_get0_notAfter(cert.get())) > 0;
}

// Runs a TLS handshake over an already connected (and, for SMTP, already
// STARTTLS-upgraded) socket. The socket stays owned by the caller.
Handshake HandshakeOn(int fd,
                      std::string_view sni,
                      std::optional<TlsProtocol> only,
                      const NetOptions& options) {
  Handshake hs;
  hs.connected = true;
  SslCtxPtr ctx = MakeClientCtx(only, options.trust_store);
  if (!ctx)
    return hs;
  hs.ssl.reset(SSL_new(ctx.get()));
  SSL_set_fd(hs.ssl.get(), fd);
  std::string name(sni);
  if (!IsIpLiteral(name))
    SSL_set_tlsext_host_name(hs.ssl.get(), name.c_str());
  ERR_clear_error();
  hs.ok = SSL_connect(hs.ssl.get()) == 1;
  ERR_clear_error();
  if (hs.ok)
    InspectCertificate(hs.ssl.get(), sni, hs);
  return hs;
}

std::optional<std::string> ReadUntil(int fd,
                                     std::string_view terminator,
                                     size_t cap) {
  std::string buf;
  while (buf.find(terminator) == std::string::npos) {
    if (buf.size() > cap)
      return std::nullopt;
    auto chunk = RecvSome(fd, 4096);
    if (!chunk || chunk->empty())
      return buf.empty() ? std::nullopt : std::optional<std::string>(buf);
    buf += *chunk;
  }
  return buf;
}

std::string ReadSslHeaders(SSL* ssl, size_t cap) {
  std::string buf;
  char chunk[4096];
  while (buf.find("\r\n\r\n") == std::string::npos && buf.size() < cap) {
    int n = SSL_read(ssl, chunk, sizeof chunk);
    if (n <= 0)
      break;
    buf.append(chunk, static_cast<size_t>(n));
  }
  return buf;
}

std::optional<std::string> HeaderValue(std::string_view head,
                                       std::string_view name) {
  size_t pos = head.find("\r\n");
  while (pos != std::string_view::npos && pos + 2 < head.size()) {
    size_t start = pos + 2;
    size_t end = head.find("\r\n", start);
    std::string_view line = head.substr(start, end - start);
    if (line.empty())
      break;
    auto colon = line.find(':');
    if (colon != std::string_view::npos &&
        ToLowerAscii(TrimWhitespace(line.substr(0, colon))) ==
            ToLowerAscii(name))
      return std::string(TrimWhitespace(line.substr(colon + 1)));
    pos = end;
  }
  return std::nullopt;
}

int StatusCode(std::string_view head) {
  // "HTTP/1.1 301 Moved"
  auto sp = head.find(' ');
  if (sp == std::string_view::npos || sp + 4 > head.size())
    return 0;
  int code = 0;
  for (size_t i = sp + 1; i < sp + 4; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(head[i])))
      return 0;
    code = code * 10 + (head[i] - '0');
  }
  return code;
}

std::string HostHeader(std::string_view host, int port, int default_port) {
  std::string h(host);
  if (h.find(':') != std::string::npos && h.front() != '[')
    h = "[" + h + "]";
  if (port != default_port)
    h += ":" + std::to_string(port);
  return h;
}

ProtocolSupport ProbeSslv3On(int fd, std::string_view sni) {
  if (!SendAll(fd, BuildSslv3ClientHello(sni)))
    return ProtocolSupport::kUnknown;
  std::string reply;
  while (reply.size() < 11) {
    auto chunk = RecvSome(fd, 4096);
    if (!chunk)
      return reply.empty() ? ProtocolSupport::kUnknown
                           : ClassifySslv3Reply(reply);
    if (chunk->empty())
      break;  // closed
    reply += *chunk;
  }
  if (reply.empty())
    return ProtocolSupport::kRefused;
  return ClassifySslv3Reply(reply);
}

// --- SMTP -----------------------------------------------------------------

struct SmtpReply {
  int code = 0;
  std::vector<std::string> lines;
};

class SmtpSession {
 public:
  SmtpSession(ScopedFd fd) : fd_(std::move(fd)) {}

  std::optional<SmtpReply> Read() {
    SmtpReply reply;
    while (true) {
      auto line = ReadLine();
      if (!line || line->size() < 3)
        return std::nullopt;
      reply.code = std::atoi(line->substr(0, 3).c_str());
      reply.lines.push_back(line->size() > 4 ? line->substr(4) : "");
      if (line->size() == 3 || (*line)[3] != '-')
        return reply;
    }
  }

  bool Send(std::string_view cmd) {
    return SendAll(fd_.get(), std::string(cmd) + "\r\n");
  }

  int fd() const { return fd_.get(); }

  // Greeting + EHLO. Returns the EHLO reply.
  std::optional<SmtpReply> Open(std::string* banner) {
    auto greeting = Read();
    if (!greeting || greeting->code != 220)
      return std::nullopt;
    if (banner && !greeting->lines.empty())
      *banner = greeting->lines.front();
    if (!Send("EHLO sitebench-scanner.invalid"))
      return std::nullopt;
    auto ehlo = Read();
    if (!ehlo || ehlo->code != 250)
      return std::nullopt;
    return ehlo;
  }

  bool StartTls() {
    if (!Send("STARTTLS"))
      return false;
    auto reply = Read();
    return reply && reply->code == 220;
  }

 private:
  std::optional<std::string> ReadLine() {
    while (true) {
      auto nl = buf_.find("\r\n");
      if (nl != std::string::npos) {
        std::string line = buf_.substr(0, nl);
        buf_.erase(0, nl + 2);
        return line;
      }
      if (buf_.size() > 16384)
        return std::nullopt;
      auto chunk = RecvSome(fd_.get(), 1024);
      if (!chunk || chunk->empty())
        return std::nullopt;
      buf_ += *chunk;
    }
  }

  ScopedFd fd_;
  std::string buf_;
};

bool AdvertisesStartTls(const SmtpReply& ehlo) {
  for (const std::string& line : ehlo.lines) {
    std::string upper;
    for (char c : line)
      upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (TrimWhitespace(upper) == "STARTTLS")
      return true;
  }
  return false;
}

}  // namespace

std::optional<int64_t> ParseHstsMaxAge(std::string_view value) {
  std::string_view rest = value;
  while (!rest.empty()) {
    auto semi = rest.find(';');
    std::string_view directive = TrimWhitespace(rest.substr(0, semi));
    auto eq = directive.find('=');
    if (eq != std::string_view::npos &&
        ToLowerAscii(TrimWhitespace(directive.substr(0, eq))) == "max-age") {
      std::string_view v = TrimWhitespace(directive.substr(eq + 1));
      if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
        v = v.substr(1, v.size() - 2);
      if (v.empty() || v.size() > 18 ||
          v.find_first_not_of("0123456789") != std::string_view::npos)
        return std::nullopt;
      return std::stoll(std::string(v));
    }
    if (semi == std::string_view::npos)
      break;
    rest.remove_prefix(semi + 1);
  }
  return std::nullopt;
}

std::string BuildSslv3ClientHello(std::string_view sni) {
  std::string body;
  body += std::string{0x03, 0x00};  // client_version
  unsigned char random[32];
  RAND_bytes(random, sizeof random);
  body.append(reinterpret_cast<char*>(random), sizeof random);
  body += '\0';  // session id
  static const unsigned char kSuites[] = {0x00, 0x2f, 0x00, 0x35, 0x00, 0x0a,
                                          0x00, 0x05, 0x00, 0x04, 0x00, 0x33,
                                          0x00, 0x39, 0x00, 0xff};
  body += static_cast<char>(0);
  body += static_cast<char>(sizeof kSuites);
  body.append(reinterpret_cast<const char*>(kSuites), sizeof kSuites);
  body += std::string{0x01, 0x00};  // null compression
  if (!sni.empty() && !IsIpLiteral(sni)) {
    std::string name(sni);
    uint16_t name_len = static_cast<uint16_t>(name.size());
    std::string ext;
    ext += std::string{0x00, 0x00};  // server_name
    uint16_t list_len = static_cast<uint16_t>(name_len + 3);
    uint16_t ext_len = static_cast<uint16_t>(list_len + 2);
    ext += static_cast<char>(ext_len >> 8);
    ext += static_cast<char>(ext_len);
    ext += static_cast<char>(list_len >> 8);
    ext += static_cast<char>(list_len);
    ext += '\0';  // host_name
    ext += static_cast<char>(name_len >> 8);
    ext += static_cast<char>(name_len);
    ext += name;
    body += static_cast<char>(ext.size() >> 8);
    body += static_cast<char>(ext.size());
    body += ext;
  }
  std::string hs;
  hs += '\x01';
  hs += static_cast<char>(body.size() >> 16);
  hs += static_cast<char>(body.size() >> 8);
  hs += static_cast<char>(body.size());
  hs += body;
  std::string record{0x16, 0x03, 0x00};
  record += static_cast<char>(hs.size() >> 8);
  record += static_cast<char>(hs.size());
  return record + hs;
}

ProtocolSupport ClassifySslv3Reply(std::string_view reply) {
  if (reply.size() < 5)
    return reply.empty() ? ProtocolSupport::kRefused
                         : ProtocolSupport::kUnknown;
  auto byte = [&](size_t i) { return static_cast<uint8_t>(reply[i]); };
  if (byte(0) == 0x15)
    return ProtocolSupport::kRefused;
  if (byte(0) != 0x16 || reply.size() < 11)
    return ProtocolSupport::kRefused;
  // record header(5) + handshake type(1) + length(3) + server_version(2)
  if (byte(5) == 0x02 && byte(9) == 0x03 && byte(10) == 0x00)
    return ProtocolSupport::kOffered;
  return ProtocolSupport::kRefused;
}

TlsFacts ScanWebTls(std::string_view host_in,
                    const NetOptions& options,
                    NetError* error) {
  std::string host = ToLowerAscii(host_in);
  TlsFacts facts;
  *error = NetError::kNone;
  std::vector<std::string> ips = options.resolver->Resolve(host);
  if (ips.empty()) {
    *error = NetError::kResolveFailed;
    return facts;
  }
  const std::string& ip = ips.front();

  auto connect_https = [&](NetError* e) {
    return ConnectTcp(ip, options.https_port, options.timeout, e);
  };

  bool https_reachable = true;
  for (TlsProtocol p : kProbeOrder) {
    NetError e;
    ScopedFd fd = connect_https(&e);
    if (!fd.valid()) {
      https_reachable = false;
      *error = e;
      break;
    }
    if (p == TlsProtocol::kSslv3) {
      facts.protocols[p] = ProbeSslv3On(fd.get(), host);
      continue;
    }
    Handshake hs = HandshakeOn(fd.get(), host, p, options);
    facts.protocols[p] =
        hs.ok ? ProtocolSupport::kOffered : ProtocolSupport::kRefused;
  }
  facts.poodle_susceptible =
      facts.protocols[TlsProtocol::kSslv3] == ProtocolSupport::kOffered;

  if (https_reachable) {
    NetError e;
    ScopedFd fd = connect_https(&e);
    if (fd.valid()) {
      Handshake hs = HandshakeOn(fd.get(), host, std::nullopt, options);
      if (hs.ok) {
        facts.https_offered = true;
        facts.cert_chain_trusted = hs.chain_trusted;
        facts.cert_hostname_match = hs.hostname_match;
        facts.cert_not_expired = hs.not_expired;
        facts.cert_valid =
            hs.chain_trusted && hs.hostname_match && hs.not_expired;
        std::string req = "GET / HTTP/1.1\r\nHost: " +
                          HostHeader(host, options.https_port, 443) +
                          "\r\nUser-Agent: " + options.user_agent +
                          "\r\nConnection: close\r\n\r\n";
        if (SSL_write(hs.ssl.get(), req.data(), static_cast<int>(req.size())) >
            0) {
          std::string head = ReadSslHeaders(hs.ssl.get(), 64 * 1024);
          if (auto hsts = HeaderValue(head, "Strict-Transport-Security")) {
            facts.hsts_present = true;
            facts.hsts_max_age = ParseHstsMaxAge(*hsts);
          }
        }
        SSL_shutdown(hs.ssl.get());
      } else {
        *error = NetError::kTlsFailed;
      }
    } else {
      *error = e;
    }
  }

  NetError e;
  ScopedFd plain = ConnectTcp(ip, options.http_port, options.timeout, &e);
  if (plain.valid()) {
    std::string req =
        "HEAD / HTTP/1.1\r\nHost: " + HostHeader(host, options.http_port, 80) +
        "\r\nUser-Agent: " + options.user_agent +
        "\r\nConnection: close\r\n\r\n";
    if (SendAll(plain.get(), req)) {
      if (auto head = ReadUntil(plain.get(), "\r\n\r\n", 64 * 1024)) {
        int code = StatusCode(*head);
        auto location = HeaderValue(*head, "Location");
        if (code >= 300 && code < 400 && location) {
          UrlParts base{"http", host, -1, "/"};
          auto target = ResolveReference(base, *location);
          facts.https_redirect = target && target->rfind("https://", 0) == 0;
        }
      }
    }
  }
  return facts;
}

MailTlsFacts ScanMailTls(const std::optional<std::string>& mx_host,
                         const NetOptions& options,
                         NetError* error) {
  MailTlsFacts facts;
  *error = NetError::kNone;
  if (!mx_host)
    return facts;
  facts.mx_host = ToLowerAscii(*mx_host);
  const std::string& host = *facts.mx_host;
  std::vector<std::string> ips = options.resolver->Resolve(host);
  if (ips.empty()) {
    *error = NetError::kResolveFailed;
    return facts;
  }
  const std::string ip = ips.front();
  auto open = [&](std::string* banner, std::optional<SmtpReply>* ehlo,
                  NetError* e) -> std::optional<SmtpSession> {
    ScopedFd fd = ConnectTcp(ip, options.smtp_port, options.timeout, e);
    if (!fd.valid())
      return std::nullopt;
    SmtpSession session(std::move(fd));
    *ehlo = session.Open(banner);
    if (!*ehlo) {
      *e = NetError::kProtocol;
      return std::nullopt;
    }
    return session;
  };

  std::string banner;
  std::optional<SmtpReply> ehlo;
  auto first = open(&banner, &ehlo, error);
  if (!first)
    return facts;
  facts.banner = banner;
  if (!AdvertisesStartTls(*ehlo)) {
    facts.starttls_offered = Tristate::kNo;
    first->Send("QUIT");
    return facts;
  }
  if (!first->StartTls()) {
    facts.starttls_offered = Tristate::kNo;
    return facts;
  }
  Handshake hs = HandshakeOn(first->fd(), host, std::nullopt, options);
  facts.starttls_offered = hs.ok ? Tristate::kYes : Tristate::kNo;
  if (hs.ok) {
    facts.cert_valid = hs.chain_trusted && hs.hostname_match && hs.not_expired
                           ? Tristate::kYes
                           : Tristate::kNo;
    SSL_shutdown(hs.ssl.get());
  }

  for (TlsProtocol p : kProbeOrder) {
    NetError e;
    std::optional<SmtpReply> unused;
    auto session = open(nullptr, &unused, &e);
    if (!session || !session->StartTls())
      continue;  // stays unknown
    if (p == TlsProtocol::kSslv3) {
      facts.protocols[p] = ProbeSslv3On(session->fd(), host);
      continue;
    }
    Handshake probe = HandshakeOn(session->fd(), host, p, options);
    facts.protocols[p] =
        probe.ok ? ProtocolSupport::kOffered : ProtocolSupport::kRefused;
  }
  return facts;
}

}  // namespace sitebench
