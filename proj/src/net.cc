#include "sitebench/net.h"

#include <algorithm>
#include <cerrno>
#include <csignal>
#include <cstring>
#include <mutex>

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include "sitebench/dns_wire.h"
#include "sitebench/url.h"

namespace sitebench {

std::optional<Endpoint> Endpoint::Parse(std::string_view text,
                                        int default_port) {
  std::string s(TrimWhitespace(text));
  if (s.empty())
    return std::nullopt;
  Endpoint ep;
  std::string port;
  if (s.front() == '[') {
    auto close = s.find(']');
    if (close == std::string::npos)
      return std::nullopt;
    ep.host = s.substr(1, close - 1);
    if (close + 1 < s.size()) {
      if (s[close + 1] != ':')
        return std::nullopt;
      port = s.substr(close + 2);
    }
  } else if (std::count(s.begin(), s.end(), ':') == 1) {
    auto colon = s.find(':');
    ep.host = s.substr(0, colon);
    port = s.substr(colon + 1);
  } else {
    ep.host = s;
  }
  ep.port = default_port;
  if (!port.empty()) {
    if (port.size() > 5 ||
        port.find_first_not_of("0123456789") != std::string::npos)
      return std::nullopt;
    ep.port = std::stoi(port);
  }
  if (ep.host.empty() || ep.port <= 0 || ep.port > 65535)
    return std::nullopt;
  return ep;
}

std::string Endpoint::ToString() const {
  if (host.find(':') != std::string::npos)
    return "[" + host + "]:" + std::to_string(port);
  return host + ":" + std::to_string(port);
}

std::string_view NetErrorName(NetError e) {
  switch (e) {
    case NetError::kNone:
      return "None";
    case NetError::kResolveFailed:
      return "ResolveFailed";
    case NetError::kConnectionFailed:
      return "ConnectionFailed";
    case NetError::kTimeout:
      return "Timeout";
    case NetError::kTlsFailed:
      return "TlsFailed";
    case NetError::kProtocol:
      return "ProtocolError";
    case NetError::kTooLarge:
      return "BodyTooLarge";
  }
  return "Unknown";
}

ScopedFd& ScopedFd::operator=(ScopedFd&& other) noexcept {
  reset(other.release());
  return *this;
}

int ScopedFd::release() {
  int fd = fd_;
  fd_ = -1;
  return fd;
}

void ScopedFd::reset(int fd) {
  if (fd_ >= 0)
    ::close(fd_);
  fd_ = fd;
}

void IgnoreSigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

ScopedFd ConnectTcp(const std::string& ip,
                    int port,
                    Millis timeout,
                    NetError* error) {
  // OpenSSL writes with write(2), so a peer reset would raise SIGPIPE.
  IgnoreSigpipe();
  *error = NetError::kConnectionFailed;
  sockaddr_storage addr{};
  socklen_t len = 0;
  int family = AF_INET;
  auto* v4 = reinterpret_cast<sockaddr_in*>(&addr);
  auto* v6 = reinterpret_cast<sockaddr_in6*>(&addr);
  if (inet_pton(AF_INET, ip.c_str(), &v4->sin_addr) == 1) {
    v4->sin_family = AF_INET;
    v4->sin_port = htons(static_cast<uint16_t>(port));
    len = sizeof(sockaddr_in);
  } else if (inet_pton(AF_INET6, ip.c_str(), &v6->sin6_addr) == 1) {
    family = AF_INET6;
    v6->sin6_family = AF_INET6;
    v6->sin6_port = htons(static_cast<uint16_t>(port));
    len = sizeof(sockaddr_in6);
  } else {
    *error = NetError::kResolveFailed;
    return {};
  }
  ScopedFd fd(::socket(family, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!fd.valid())
    return {};
  int flags = fcntl(fd.get(), F_GETFL, 0);
  fcntl(fd.get(), F_SETFL, flags | O_NONBLOCK);
  int rc = ::connect(fd.get(), reinterpret_cast<sockaddr*>(&addr), len);
  if (rc != 0 && errno != EINPROGRESS)
    return {};
  if (rc != 0) {
    pollfd p{fd.get(), POLLOUT, 0};
    int n = ::poll(&p, 1, static_cast<int>(timeout.count()));
    if (n == 0) {
      *error = NetError::kTimeout;
      return {};
    }
    int so_error = 0;
    socklen_t so_len = sizeof so_error;
    getsockopt(fd.get(), SOL_SOCKET, SO_ERROR, &so_error, &so_len);
    if (n < 0 || so_error != 0)
      return {};
  }
  fcntl(fd.get(), F_SETFL, flags);
  timeval tv{};
  tv.tv_sec = timeout.count() / 1000;
  tv.tv_usec = (timeout.count() % 1000) * 1000;
  setsockopt(fd.get(), SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
  setsockopt(fd.get(), SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
  int one = 1;
  setsockopt(fd.get(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  *error = NetError::kNone;
  return fd;
}

bool SendAll(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR)
      continue;
    if (n <= 0)
      return false;
    data.remove_prefix(static_cast<size_t>(n));
  }
  return true;
}

std::optional<std::string> RecvSome(int fd, size_t max) {
  std::string buf(max, '\0');
  while (true) {
    ssize_t n = ::recv(fd, buf.data(), max, 0);
    if (n < 0 && errno == EINTR)
      continue;
    if (n < 0)
      return std::nullopt;
    buf.resize(static_cast<size_t>(n));
    return buf;
  }
}

namespace {

std::string StripBrackets(std::string_view host) {
  if (host.size() > 2 && host.front() == '[' && host.back() == ']')
    host = host.substr(1, host.size() - 2);
  return std::string(host);
}

class GetAddrInfoResolver : public HostResolver {
 public:
  std::vector<std::string> Resolve(std::string_view host) override {
    if (IsIpLiteral(host))
      return {StripBrackets(host)};
    addrinfo hints{};
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    std::string name(host);
    if (getaddrinfo(name.c_str(), nullptr, &hints, &res) != 0)
      return {};
    std::vector<std::string> v4, v6;
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
      char buf[INET6_ADDRSTRLEN];
      if (ai->ai_family == AF_INET) {
        inet_ntop(AF_INET,
                  &reinterpret_cast<sockaddr_in*>(ai->ai_addr)->sin_addr, buf,
                  sizeof buf);
        v4.push_back(buf);
      } else if (ai->ai_family == AF_INET6) {
        inet_ntop(AF_INET6,
                  &reinterpret_cast<sockaddr_in6*>(ai->ai_addr)->sin6_addr, buf,
                  sizeof buf);
        v6.push_back(buf);
      }
    }
    freeaddrinfo(res);
    std::vector<std::string> out;
    for (auto* list : {&v4, &v6}) {
      for (auto& ip : *list) {
        if (std::find(out.begin(), out.end(), ip) == out.end())
          out.push_back(ip);
      }
    }
    return out;
  }
};

class WireResolver : public HostResolver {
 public:
  WireResolver(Endpoint server, Millis timeout)
      : client_(std::move(server), timeout) {}

  std::vector<std::string> Resolve(std::string_view host) override {
    if (IsIpLiteral(host))
      return {StripBrackets(host)};
    std::vector<std::string> out;
    for (dns::RrType type : {dns::RrType::kA, dns::RrType::kAaaa}) {
      dns::QueryResult r = client_.Query(host, type, /*dnssec_ok=*/false);
      if (r.status != dns::QueryStatus::kOk)
        continue;
      for (const dns::ResourceRecord& rr : r.response.answers) {
        if (rr.type == type)
          out.push_back(rr.text);
      }
    }
    return out;
  }

 private:
  dns::DnsClient client_;
};

}  // namespace

std::shared_ptr<HostResolver> SystemResolver() {
  static auto resolver = std::make_shared<GetAddrInfoResolver>();
  return resolver;
}

std::shared_ptr<HostResolver> DnsServerResolver(Endpoint server,
                                                Millis timeout) {
  return std::make_shared<WireResolver>(std::move(server), timeout);
}

bool LoadTrustStore(SSL_CTX* ctx, const std::string& trust_store) {
  if (trust_store.empty())
    return SSL_CTX_set_default_verify_paths(ctx) == 1;
  return SSL_CTX_load_verify_locations(ctx, trust_store.c_str(), nullptr) == 1;
}

}  // namespace sitebench
