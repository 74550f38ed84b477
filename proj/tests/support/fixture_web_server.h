#ifndef SITEBENCH_TESTS_SUPPORT_FIXTURE_WEB_SERVER_H_
#define SITEBENCH_TESTS_SUPPORT_FIXTURE_WEB_SERVER_H_

#include <atomic>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sitebench/net.h"
#include "support/tls_util.h"

namespace sitebench::testing {

struct FixtureResponse {
  int status = 200;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;

  static FixtureResponse Redirect(int status, std::string location);
  static FixtureResponse Html(std::string body);
};

struct VirtualHost {
  std::map<std::string, FixtureResponse> http_routes;
  std::map<std::string, FixtureResponse> https_routes;
  TlsConfig tls;
  // When false the plain listener drops connections for this host.
  bool plain_http = true;
};

// HTTP/1.1 and HTTPS server for fixture sites. Requests are dispatched to
// virtual hosts by SNI (TLS) or the Host header (plain). Every connection is
// closed after one response.
class FixtureWebServer {
 public:
  FixtureWebServer() = default;
  ~FixtureWebServer();
  FixtureWebServer(const FixtureWebServer&) = delete;
  FixtureWebServer& operator=(const FixtureWebServer&) = delete;

  // Only before Start().
  void AddHost(const std::string& name, VirtualHost host);
  void Start(const std::string& bind_ip = "127.0.0.1");
  void Stop();

  int http_port() const { return http_port_; }
  int https_port() const { return https_port_; }

  // Connections (TCP accepts attributed by SNI or Host) per host name.
  int connections(const std::string& host) const;
  // Parsed HTTP requests per host name.
  int requests(const std::string& host) const;
  int total_connections() const;
  // "host path" for each request, in arrival order.
  std::vector<std::string> request_log() const;
  void ResetCounters();

 private:
  struct Host {
    VirtualHost config;
    SslCtxPtr ctx;
  };

  void AcceptLoop(int listen_fd, bool tls);
  void Serve(ScopedFd fd, bool tls);
  void ServeTls(ScopedFd fd);
  void ServePlain(ScopedFd fd);
  // Returns the response for a parsed request.
  FixtureResponse Dispatch(const std::string& host,
                           const std::string& path,
                           bool tls);
  void CountConnection(const std::string& host);

  std::map<std::string, Host> hosts_;
  ScopedFd http_listener_;
  ScopedFd https_listener_;
  int http_port_ = 0;
  int https_port_ = 0;
  std::atomic<bool> stopping_{false};
  std::vector<std::thread> acceptors_;
  std::mutex threads_mu_;
  std::vector<std::thread> workers_;

  mutable std::mutex stats_mu_;
  std::map<std::string, int> connections_;
  std::map<std::string, int> requests_;
  std::vector<std::string> log_;
};

// Binds a TCP listener on |ip|:|port| (0 for ephemeral) and returns the port.
ScopedFd Listen(const std::string& ip, int port, int* bound_port);

// Reads one HTTP request head from |read|. Returns false on EOF or error.
template <typename ReadFn>
bool ReadRequestHead(ReadFn&& read, std::string* head) {
  while (head->find("\r\n\r\n") == std::string::npos) {
    std::string chunk = read();
    if (chunk.empty() || head->size() > 65536)
      return false;
    *head += chunk;
  }
  return true;
}

}  // namespace sitebench::testing

#endif  // SITEBENCH_TESTS_SUPPORT_FIXTURE_WEB_SERVER_H_
