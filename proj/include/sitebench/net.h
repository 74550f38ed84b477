#ifndef SITEBENCH_NET_H_
#define SITEBENCH_NET_H_

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/ssl.h>

namespace sitebench {

using Millis = std::chrono::milliseconds;

struct Endpoint {
  std::string host;
  int port = 0;

  // "127.0.0.1:5353", "[::1]:53" or a bare address (port |default_port|).
  static std::optional<Endpoint> Parse(std::string_view text, int default_port);
  std::string ToString() const;
};

enum class NetError {
  kNone,
  kResolveFailed,
  kConnectionFailed,
  kTimeout,
  kTlsFailed,
  kProtocol,
  kTooLarge,
};

std::string_view NetErrorName(NetError e);

// Owning file descriptor.
class ScopedFd {
 public:
  ScopedFd() = default;
  explicit ScopedFd(int fd) : fd_(fd) {}
  ScopedFd(ScopedFd&& other) noexcept : fd_(other.release()) {}
  ScopedFd& operator=(ScopedFd&& other) noexcept;
  ScopedFd(const ScopedFd&) = delete;
  ScopedFd& operator=(const ScopedFd&) = delete;
  ~ScopedFd() { reset(); }

  int get() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int release();
  void reset(int fd = -1);

 private:
  int fd_ = -1;
};

struct SslDeleter {
  void operator()(SSL* s) const { SSL_free(s); }
  void operator()(SSL_CTX* c) const { SSL_CTX_free(c); }
  void operator()(X509* x) const { X509_free(x); }
};
using SslPtr = std::unique_ptr<SSL, SslDeleter>;
using SslCtxPtr = std::unique_ptr<SSL_CTX, SslDeleter>;
using X509Ptr = std::unique_ptr<X509, SslDeleter>;

// Connects to |ip|:|port| within |timeout|. The socket is left blocking with
// send/receive timeouts of |timeout|.
ScopedFd ConnectTcp(const std::string& ip,
                    int port,
                    Millis timeout,
                    NetError* error);

bool SendAll(int fd, std::string_view data);

// Sets SIGPIPE to ignored for the process (once).
void IgnoreSigpipe();

// Reads up to |max| bytes; empty on EOF, nullopt on error or timeout.
std::optional<std::string> RecvSome(int fd, size_t max);

// Maps host names to addresses. Implementations are thread-safe.
class HostResolver {
 public:
  virtual ~HostResolver() = default;
  // IPv4 addresses first, then IPv6. Empty when the name does not resolve.
  // IP literals resolve to themselves.
  virtual std::vector<std::string> Resolve(std::string_view host) = 0;
};

// getaddrinfo-based resolver.
std::shared_ptr<HostResolver> SystemResolver();

// Resolves through the given DNS server with the built-in wire client.
std::shared_ptr<HostResolver> DnsServerResolver(Endpoint server,
                                                Millis timeout);

// Options shared by every scanner that opens connections.
struct NetOptions {
  Millis timeout{10000};
  int http_port = 80;
  int https_port = 443;
  int smtp_port = 25;
  // PEM bundle used for certificate validation; empty means system default.
  std::string trust_store;
  std::string user_agent = "sitebench-scanner/1.0";
  std::shared_ptr<HostResolver> resolver = SystemResolver();
};

// Loads |trust_store| (or the system default paths) into |ctx|.
bool LoadTrustStore(SSL_CTX* ctx, const std::string& trust_store);

}  // namespace sitebench

#endif  // SITEBENCH_NET_H_
