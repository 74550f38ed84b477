#ifndef SITEBENCH_DNS_WIRE_H_
#define SITEBENCH_DNS_WIRE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sitebench/net.h"

namespace sitebench::dns {

enum class RrType : uint16_t {
  kA = 1,
  kNs = 2,
  kCname = 5,
  kSoa = 6,
  kMx = 15,
  kTxt = 16,
  kAaaa = 28,
  kOpt = 41,
  kRrsig = 46,
};

enum Rcode : uint8_t { kNoError = 0, kServFail = 2, kNxDomain = 3 };

// One record. Decoded fields depend on type: |text| holds the address for
// A/AAAA, the target for NS/CNAME/MX and the concatenated strings for TXT.
// Other types keep only |rdata|.
struct ResourceRecord {
  std::string name;
  RrType type = RrType::kA;
  uint16_t klass = 1;
  uint32_t ttl = 300;
  uint16_t preference = 0;  // MX
  std::string text;
  std::vector<uint8_t> rdata;

  static ResourceRecord A(std::string name, std::string ip);
  static ResourceRecord Aaaa(std::string name, std::string ip);
  static ResourceRecord Ns(std::string name, std::string host);
  static ResourceRecord Mx(std::string name, uint16_t pref, std::string host);
  static ResourceRecord Txt(std::string name, std::string text);
  // Placeholder signature covering |covered|; contents are not validated.
  static ResourceRecord Rrsig(std::string name, RrType covered);

  bool operator==(const ResourceRecord&) const = default;
};

struct Question {
  std::string name;
  RrType type = RrType::kA;
  uint16_t klass = 1;
  bool operator==(const Question&) const = default;
};

struct Message {
  uint16_t id = 0;
  bool qr = false;
  uint8_t opcode = 0;
  bool aa = false;
  bool tc = false;
  bool rd = true;
  bool ra = false;
  bool ad = false;
  bool cd = false;
  uint8_t rcode = kNoError;
  std::vector<Question> questions;
  std::vector<ResourceRecord> answers;
  std::vector<ResourceRecord> authority;
  std::vector<ResourceRecord> additional;  // without the OPT pseudo-record
  // EDNS0: an OPT record is emitted/present.
  bool edns = false;
  bool dnssec_ok = false;
  uint16_t udp_size = 1232;
};

class WireError : public std::runtime_error {
 public:
  explicit WireError(const std::string& what) : std::runtime_error(what) {}
};

// Throws WireError for names or rdata that cannot be encoded.
std::vector<uint8_t> Encode(const Message& msg);
// Throws WireError on truncated or malformed input.
Message Decode(std::span<const uint8_t> wire);

enum class QueryStatus { kOk, kNxDomain, kServFail, kTimeout, kError };

struct QueryResult {
  QueryStatus status = QueryStatus::kError;
  Message response;
};

// Stub resolver client: UDP first, TCP when the answer is truncated.
class DnsClient {
 public:
  DnsClient(Endpoint server, Millis timeout, int attempts = 2);

  QueryResult Query(std::string_view name, RrType type, bool dnssec_ok);

 private:
  std::optional<Message> Exchange(const Message& query, bool tcp);

  Endpoint server_;
  Millis timeout_;
  int attempts_;
};

}  // namespace sitebench::dns

#endif  // SITEBENCH_DNS_WIRE_H_
