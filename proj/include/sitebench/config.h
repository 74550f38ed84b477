#ifndef SITEBENCH_CONFIG_H_
#define SITEBENCH_CONFIG_H_

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sitebench/orchestrator.h"
#include "sitebench/site_scanner.h"

namespace sitebench {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Settings shared by `serve` and the scanning commands. Relative paths are
// resolved against the config file's directory.
struct ServiceConfig {
  std::string listen_host = "127.0.0.1";
  int listen_port = 8080;
  std::string database = "sitebench.db";
  std::string blacklist = "blacklist.tsv";
  OrchestratorOptions orchestrator;

  // DNS server for DNS facts and host lookups ("ip[:port]"); empty means
  // the first nameserver in /etc/resolv.conf.
  std::string resolver;
  std::string signatures_dir = SITEBENCH_DEFAULT_DATA_DIR "/signatures";
  std::string filters = SITEBENCH_DEFAULT_DATA_DIR "/default_filters.txt";
  std::string catalog;
  // Empty: no geolocation data, server_location becomes neutral.
  std::string geodb;
  std::string trust_store;
  int http_port = 80;
  int https_port = 443;
  int smtp_port = 25;
  std::chrono::milliseconds timeout{10000};
  std::string user_agent =
      "sitebench-scanner/1.0 (+opt-out: contact the operator)";
};

// "90s", "10m", "2h", "7d" or a bare number of seconds.
std::optional<std::chrono::seconds> ParseDuration(std::string_view text);

// key = value lines, '#' comments. Unknown keys and bad values throw
// ConfigError naming the line.
ServiceConfig ParseConfig(std::string_view text,
                          const std::string& base_dir = "");
ServiceConfig LoadConfig(const std::string& path);

// Loads signatures, filters, catalog and geodb and sets up networking.
// Throws ConfigError when a file cannot be loaded.
ScanContext BuildScanContext(const ServiceConfig& config);

}  // namespace sitebench

#endif  // SITEBENCH_CONFIG_H_
