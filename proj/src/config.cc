#include "sitebench/config.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "sitebench/url.h"

namespace sitebench {

namespace {

std::string ResolvePath(const std::string& base_dir, std::string_view value) {
  std::filesystem::path p{std::string(value)};
  if (p.empty() || p.is_absolute() || base_dir.empty())
    return p.string();
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

int ParseInt(std::string_view value, int min, int max) {
  int out = 0;
  auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || out < min ||
      out > max)
    throw ConfigError("expected an integer in [" + std::to_string(min) + ", " +
                      std::to_string(max) + "]");
  return out;
}

std::chrono::seconds RequireDuration(std::string_view value) {
  auto d = ParseDuration(value);
  if (!d)
    throw ConfigError("expected a duration such as 10m or 7d");
  return *d;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::optional<std::chrono::seconds> ParseDuration(std::string_view text) {
  text = TrimWhitespace(text);
  if (text.empty())
    return std::nullopt;
  int64_t unit = 1;
  switch (text.back()) {
    case 's':
      text.remove_suffix(1);
      break;
    case 'm':
      unit = 60;
      text.remove_suffix(1);
      break;
    case 'h':
      unit = 3600;
      text.remove_suffix(1);
      break;
    case 'd':
      unit = 86400;
      text.remove_suffix(1);
      break;
    default:
      break;
  }
  int64_t n = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
      n < 0)
    return std::nullopt;
  return std::chrono::seconds(n * unit);
}

ServiceConfig ParseConfig(std::string_view text, const std::string& base_dir) {
  ServiceConfig c;
  // Default state files live next to the config file.
  c.database = ResolvePath(base_dir, c.database);
  c.blacklist = ResolvePath(base_dir, c.blacklist);
  using Setter = std::function<void(std::string_view)>;
  auto path = [&](std::string* field) {
    return [field, &base_dir](std::string_view v) {
      *field = ResolvePath(base_dir, v);
    };
  };
  const std::map<std::string, Setter, std::less<>> setters = {
      {"listen",
       [&](std::string_view v) {
         auto ep = Endpoint::Parse(v, 8080);
         if (!ep)
           throw ConfigError("expected host:port");
         c.listen_host = ep->host;
         c.listen_port = ep->port;
       }},
      {"database",
       [&](std::string_view v) {
         c.database =
             v == ":memory:" ? std::string(v) : ResolvePath(base_dir, v);
       }},
      {"blacklist", path(&c.blacklist)},
      {"worker_count",
       [&](std::string_view v) {
         c.orchestrator.worker_count = ParseInt(v, 1, 256);
       }},
      {"global_concurrency",
       [&](std::string_view v) {
         c.orchestrator.global_concurrency = ParseInt(v, 1, 1024);
       }},
      {"max_attempts",
       [&](std::string_view v) {
         c.orchestrator.max_attempts = ParseInt(v, 1, 100);
       }},
      {"per_host_min_interval",
       [&](std::string_view v) {
         c.orchestrator.per_host_min_interval = RequireDuration(v);
       }},
      {"rescan_interval",
       [&](std::string_view v) {
         c.orchestrator.rescan_interval = RequireDuration(v);
       }},
      {"resolver",
       [&](std::string_view v) {
         if (!v.empty() && !Endpoint::Parse(v, 53))
           throw ConfigError("expected ip[:port]");
         c.resolver = std::string(v);
       }},
      {"signatures", path(&c.signatures_dir)},
      {"filters", path(&c.filters)},
      {"catalog", path(&c.catalog)},
      {"geodb", path(&c.geodb)},
      {"trust_store", path(&c.trust_store)},
      {"http_port",
       [&](std::string_view v) { c.http_port = ParseInt(v, 1, 65535); }},
      {"https_port",
       [&](std::string_view v) { c.https_port = ParseInt(v, 1, 65535); }},
      {"smtp_port",
       [&](std::string_view v) { c.smtp_port = ParseInt(v, 1, 65535); }},
      {"timeout_ms",
       [&](std::string_view v) {
         c.timeout = std::chrono::milliseconds(ParseInt(v, 1, 600000));
       }},
      {"user_agent",
       [&](std::string_view v) { c.user_agent = std::string(v); }},
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = TrimWhitespace(raw);
    if (line.empty() || line.front() == '#')
      continue;
    std::string where = "config line " + std::to_string(line_no) + ": ";
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(where + "expected key = value");
    std::string_view key = TrimWhitespace(line.substr(0, eq));
    std::string_view value = TrimWhitespace(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end())
      throw ConfigError(where + "unknown key '" + std::string(key) + "'");
    try {
      it->second(value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + std::string(key) + ": " + e.what());
    }
  }
  return c;
}

ServiceConfig LoadConfig(const std::string& path) {
  std::string text = ReadFile(path);
  std::string dir = std::filesystem::path(path).parent_path().string();
  return ParseConfig(text, dir.empty() ? "." : dir);
}

ScanContext BuildScanContext(const ServiceConfig& config) {
  ScanContext ctx;
  ctx.net.timeout = config.timeout;
  ctx.net.http_port = config.http_port;
  ctx.net.https_port = config.https_port;
  ctx.net.smtp_port = config.smtp_port;
  ctx.net.trust_store = config.trust_store;
  ctx.net.user_agent = config.user_agent;
  std::optional<Endpoint> dns = config.resolver.empty()
                                    ? SystemDnsServer()
                                    : Endpoint::Parse(config.resolver, 53);
  if (!dns)
    throw ConfigError("no DNS resolver configured or found in resolv.conf");
  ctx.dns_server = *dns;
  if (!config.resolver.empty())
    ctx.net.resolver = DnsServerResolver(*dns, config.timeout);
  ctx.content.limits.timeout = config.timeout;
  try {
    ctx.signatures = SignatureSet::LoadDir(config.signatures_dir);
    if (!config.filters.empty())
      ctx.filters = ParseFilterList(ReadFile(config.filters));
    if (!config.catalog.empty())
      ctx.catalog = CheckCatalog::LoadFile(config.catalog);
    if (!config.geodb.empty())
      ctx.geodb = GeoDb::LoadFile(config.geodb);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return ctx;
}

}  // namespace sitebench
