#include "sitebench/geoip.h"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <arpa/inet.h>

#include "sitebench/url.h"

namespace sitebench {

namespace {

std::string Key(const IpAddress& ip) {
  return std::string(reinterpret_cast<const char*>(ip.bytes.data()),
                     ip.v6 ? 16 : 4);
}

}  // namespace

std::optional<IpAddress> ParseIp(std::string_view text) {
  std::string s(TrimWhitespace(text));
  if (s.size() > 2 && s.front() == '[' && s.back() == ']')
    s = s.substr(1, s.size() - 2);
  IpAddress ip;
  if (inet_pton(AF_INET, s.c_str(), ip.bytes.data()) == 1)
    return ip;
  ip.v6 = true;
  if (inet_pton(AF_INET6, s.c_str(), ip.bytes.data()) == 1)
    return ip;
  return std::nullopt;
}

IpAddress MaskAddress(const IpAddress& ip, int prefix_len) {
  IpAddress out = ip;
  for (int byte = 0; byte < 16; ++byte) {
    int keep = prefix_len - byte * 8;
    if (keep >= 8)
      continue;
    out.bytes[byte] &= keep <= 0 ? 0 : static_cast<uint8_t>(0xff << (8 - keep));
  }
  return out;
}

GeoDb GeoDb::Parse(std::string_view text) {
  GeoDb db;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = TrimWhitespace(raw);
    if (line.empty() || line.front() == '#')
      continue;
    std::string where = "geodb line " + std::to_string(line_no) + ": ";
    auto tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw GeoDbError(where + "expected CIDR<TAB>country");
    std::string_view cidr = TrimWhitespace(line.substr(0, tab));
    std::string country(TrimWhitespace(line.substr(tab + 1)));
    if (country.size() != 2 ||
        !std::isupper(static_cast<unsigned char>(country[0])) ||
        !std::isupper(static_cast<unsigned char>(country[1])))
      throw GeoDbError(where + "bad country code '" + country + "'");
    auto slash = cidr.find('/');
    auto ip = ParseIp(cidr.substr(0, slash));
    if (!ip)
      throw GeoDbError(where + "bad address");
    int prefix = ip->bit_width();
    if (slash != std::string_view::npos) {
      std::string len(cidr.substr(slash + 1));
      if (len.empty() || len.size() > 3 ||
          len.find_first_not_of("0123456789") != std::string::npos)
        throw GeoDbError(where + "bad prefix length");
      prefix = std::stoi(len);
      if (prefix > ip->bit_width())
        throw GeoDbError(where + "prefix length out of range");
    }
    db.ranges_.push_back({MaskAddress(*ip, prefix), prefix, country});
  }
  db.Index();
  return db;
}

GeoDb GeoDb::LoadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw GeoDbError("cannot open geodb " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

void GeoDb::Index() {
  for (const GeoRange& r : ranges_) {
    // First row wins for duplicate networks.
    by_prefix_[r.network.v6][r.prefix_len].emplace(Key(r.network), r.country);
  }
}

std::optional<std::string> GeoDb::Lookup(std::string_view text) const {
  auto ip = ParseIp(text);
  if (!ip)
    return std::nullopt;
  for (const auto& [prefix, table] : by_prefix_[ip->v6]) {
    auto it = table.find(Key(MaskAddress(*ip, prefix)));
    if (it != table.end())
      return it->second;
  }
  return std::nullopt;
}

GeoFacts Geolocate(const std::vector<GeoQuery>& queries, const GeoDb& db) {
  GeoFacts facts;
  std::set<std::pair<ServerRole, std::string>> seen;
  for (const GeoQuery& q : queries) {
    if (!seen.insert({q.role, q.ip}).second)
      continue;
    facts.locations.push_back({q.role, q.host, q.ip, db.Lookup(q.ip)});
  }
  return facts;
}

}  // namespace sitebench
