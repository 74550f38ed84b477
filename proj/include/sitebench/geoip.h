#ifndef SITEBENCH_GEOIP_H_
#define SITEBENCH_GEOIP_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sitebench/facts.h"

namespace sitebench {

struct IpAddress {
  bool v6 = false;
  std::array<uint8_t, 16> bytes{};  // IPv4 uses the first four bytes

  int bit_width() const { return v6 ? 128 : 32; }
  bool operator==(const IpAddress&) const = default;
};

std::optional<IpAddress> ParseIp(std::string_view text);

// Clears all bits past |prefix_len|.
IpAddress MaskAddress(const IpAddress& ip, int prefix_len);

struct GeoRange {
  IpAddress network;
  int prefix_len = 0;
  std::string country;
};

class GeoDbError : public std::runtime_error {
 public:
  explicit GeoDbError(const std::string& what) : std::runtime_error(what) {}
};

// Country lookup over `CIDR <TAB> ISO-3166-alpha-2` rows, longest prefix
// wins. Lookups probe one hash table per distinct prefix length.
class GeoDb {
 public:
  static GeoDb Parse(std::string_view text);
  static GeoDb LoadFile(const std::string& path);

  std::optional<std::string> Lookup(std::string_view ip) const;

  const std::vector<GeoRange>& ranges() const { return ranges_; }

 private:
  void Index();

  std::vector<GeoRange> ranges_;
  // Per family (0 = v4, 1 = v6): prefix length (descending) -> network -> cc.
  std::array<std::map<int,
                      std::unordered_map<std::string, std::string>,
                      std::greater<int>>,
             2>
      by_prefix_;
};

struct GeoQuery {
  ServerRole role = ServerRole::kWeb;
  std::string host;
  std::string ip;
};

// One location per distinct (role, ip); country unknown when no range covers
// the address.
GeoFacts Geolocate(const std::vector<GeoQuery>& queries, const GeoDb& db);

}  // namespace sitebench

#endif  // SITEBENCH_GEOIP_H_
