#include "sitebench/dns_wire.h"

#include <cstring>
#include <random>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>

#include "sitebench/url.h"

namespace sitebench::dns {

namespace {

constexpr size_t kMaxMessage = 65535;

class Writer {
 public:
  void U8(uint8_t v) { out_.push_back(v); }
  void U16(uint16_t v) {
    out_.push_back(static_cast<uint8_t>(v >> 8));
    out_.push_back(static_cast<uint8_t>(v));
  }
  void U32(uint32_t v) {
    U16(static_cast<uint16_t>(v >> 16));
    U16(static_cast<uint16_t>(v));
  }
  void Bytes(std::span<const uint8_t> b) {
    out_.insert(out_.end(), b.begin(), b.end());
  }
  void Name(std::string_view name) {
    if (!name.empty() && name.back() == '.')
      name.remove_suffix(1);
    size_t total = 0;
    while (!name.empty()) {
      auto dot = name.find('.');
      std::string_view label = name.substr(0, dot);
      if (label.empty() || label.size() > 63)
        throw WireError("bad label in name");
      total += label.size() + 1;
      U8(static_cast<uint8_t>(label.size()));
      out_.insert(out_.end(), label.begin(), label.end());
      if (dot == std::string_view::npos)
        break;
      name.remove_prefix(dot + 1);
    }
    if (total > 254)
      throw WireError("name too long");
    U8(0);
  }
  std::vector<uint8_t>& out() { return out_; }

 private:
  std::vector<uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> wire) : wire_(wire) {}

  uint8_t U8() {
    Need(1);
    return wire_[pos_++];
  }
  uint16_t U16() {
    Need(2);
    uint16_t v = static_cast<uint16_t>(wire_[pos_] << 8 | wire_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  uint32_t U32() {
    uint32_t hi = U16();
    return hi << 16 | U16();
  }
  std::span<const uint8_t> Bytes(size_t n) {
    Need(n);
    auto b = wire_.subspan(pos_, n);
    pos_ += n;
    return b;
  }
  std::string Name() { return NameAt(pos_, &pos_); }
  size_t pos() const { return pos_; }

 private:
  void Need(size_t n) const {
    if (pos_ + n > wire_.size())
      throw WireError("truncated message");
  }

  // Follows compression pointers; |end| receives the offset after the name
  // as it appears at |at|.
  std::string NameAt(size_t at, size_t* end) const {
    std::string name;
    bool jumped = false;
    int hops = 0;
    while (true) {
      if (at >= wire_.size())
        throw WireError("name runs past end");
      uint8_t len = wire_[at];
      if ((len & 0xc0) == 0xc0) {
        if (at + 1 >= wire_.size())
          throw WireError("truncated pointer");
        if (++hops > 64)
          throw WireError("pointer loop");
        size_t target = static_cast<size_t>((len & 0x3f) << 8 | wire_[at + 1]);
        if (!jumped)
          *end = at + 2;
        jumped = true;
        at = target;
        continue;
      }
      if (len & 0xc0)
        throw WireError("bad label type");
      if (len == 0) {
        if (!jumped)
          *end = at + 1;
        break;
      }
      if (at + 1 + len > wire_.size())
        throw WireError("label runs past end");
      if (!name.empty())
        name += '.';
      name.append(reinterpret_cast<const char*>(&wire_[at + 1]), len);
      if (name.size() > 255)
        throw WireError("name too long");
      at += 1 + len;
    }
    return ToLowerAscii(name);
  }

  std::span<const uint8_t> wire_;
  size_t pos_ = 0;
};

std::vector<uint8_t> EncodeRdata(const ResourceRecord& rr) {
  Writer w;
  switch (rr.type) {
    case RrType::kA: {
      in_addr a{};
      if (inet_pton(AF_INET, rr.text.c_str(), &a) != 1)
        throw WireError("bad A address " + rr.text);
      w.Bytes({reinterpret_cast<const uint8_t*>(&a), 4});
      break;
    }
    case RrType::kAaaa: {
      in6_addr a{};
      if (inet_pton(AF_INET6, rr.text.c_str(), &a) != 1)
        throw WireError("bad AAAA address " + rr.text);
      w.Bytes({a.s6_addr, 16});
      break;
    }
    case RrType::kNs:
    case RrType::kCname:
      w.Name(rr.text);
      break;
    case RrType::kMx:
      w.U16(rr.preference);
      w.Name(rr.text);
      break;
    case RrType::kTxt: {
      std::string_view rest = rr.text;
      do {
        std::string_view chunk = rest.substr(0, 255);
        w.U8(static_cast<uint8_t>(chunk.size()));
        w.Bytes({reinterpret_cast<const uint8_t*>(chunk.data()), chunk.size()});
        rest.remove_prefix(chunk.size());
      } while (!rest.empty());
      break;
    }
    default:
      return rr.rdata;
  }
  return std::move(w.out());
}

void DecodeRdata(std::span<const uint8_t> wire,
                 size_t offset,
                 size_t len,
                 ResourceRecord& rr) {
  Reader r(wire.first(offset + len));
  r.Bytes(offset);
  auto raw = wire.subspan(offset, len);
  rr.rdata.assign(raw.begin(), raw.end());
  switch (rr.type) {
    case RrType::kA: {
      if (len != 4)
        throw WireError("bad A rdata");
      char buf[INET_ADDRSTRLEN];
      inet_ntop(AF_INET, raw.data(), buf, sizeof buf);
      rr.text = buf;
      break;
    }
    case RrType::kAaaa: {
      if (len != 16)
        throw WireError("bad AAAA rdata");
      char buf[INET6_ADDRSTRLEN];
      inet_ntop(AF_INET6, raw.data(), buf, sizeof buf);
      rr.text = buf;
      break;
    }
    case RrType::kNs:
    case RrType::kCname:
      rr.text = r.Name();
      break;
    case RrType::kMx:
      rr.preference = r.U16();
      rr.text = r.Name();
      break;
    case RrType::kTxt: {
      while (r.pos() < offset + len) {
        uint8_t n = r.U8();
        auto s = r.Bytes(n);
        rr.text.append(reinterpret_cast<const char*>(s.data()), s.size());
      }
      break;
    }
    default:
      break;
  }
}

void WriteRecord(Writer& w, const ResourceRecord& rr) {
  w.Name(rr.name);
  w.U16(static_cast<uint16_t>(rr.type));
  w.U16(rr.klass);
  w.U32(rr.ttl);
  std::vector<uint8_t> rdata = EncodeRdata(rr);
  if (rdata.size() > 0xffff)
    throw WireError("rdata too long");
  w.U16(static_cast<uint16_t>(rdata.size()));
  w.Bytes(rdata);
}

}  // namespace

ResourceRecord ResourceRecord::A(std::string name, std::string ip) {
  return {std::move(name), RrType::kA, 1, 300, 0, std::move(ip), {}};
}
ResourceRecord ResourceRecord::Aaaa(std::string name, std::string ip) {
  return {std::move(name), RrType::kAaaa, 1, 300, 0, std::move(ip), {}};
}
ResourceRecord ResourceRecord::Ns(std::string name, std::string host) {
  return {std::move(name), RrType::kNs, 1, 300, 0, std::move(host), {}};
}
ResourceRecord ResourceRecord::Mx(std::string name,
                                  uint16_t pref,
                                  std::string host) {
  return {std::move(name), RrType::kMx, 1, 300, pref, std::move(host), {}};
}
ResourceRecord ResourceRecord::Txt(std::string name, std::string text) {
  return {std::move(name), RrType::kTxt, 1, 300, 0, std::move(text), {}};
}
ResourceRecord ResourceRecord::Rrsig(std::string name, RrType covered) {
  ResourceRecord rr{std::move(name), RrType::kRrsig, 1, 300, 0, {}, {}};
  // type covered, algorithm 13, labels, original TTL, expiration, inception,
  // key tag, signer "." and an empty signature.
  uint16_t t = static_cast<uint16_t>(covered);
  rr.rdata = {static_cast<uint8_t>(t >> 8),
              static_cast<uint8_t>(t),
              13,
              2,
              0,
              0,
              1,
              44,
              0xff,
              0xff,
              0xff,
              0xff,
              0,
              0,
              0,
              0,
              0,
              1,
              0};
  return rr;
}

std::vector<uint8_t> Encode(const Message& msg) {
  Writer w;
  w.U16(msg.id);
  uint16_t flags = static_cast<uint16_t>(
      (msg.qr ? 0x8000 : 0) | (msg.opcode & 0xf) << 11 | (msg.aa ? 0x0400 : 0) |
      (msg.tc ? 0x0200 : 0) | (msg.rd ? 0x0100 : 0) | (msg.ra ? 0x0080 : 0) |
      (msg.ad ? 0x0020 : 0) | (msg.cd ? 0x0010 : 0) | (msg.rcode & 0xf));
  w.U16(flags);
  w.U16(static_cast<uint16_t>(msg.questions.size()));
  w.U16(static_cast<uint16_t>(msg.answers.size()));
  w.U16(static_cast<uint16_t>(msg.authority.size()));
  w.U16(static_cast<uint16_t>(msg.additional.size() + (msg.edns ? 1 : 0)));
  for (const Question& q : msg.questions) {
    w.Name(q.name);
    w.U16(static_cast<uint16_t>(q.type));
    w.U16(q.klass);
  }
  for (const auto* section : {&msg.answers, &msg.authority, &msg.additional}) {
    for (const ResourceRecord& rr : *section)
      WriteRecord(w, rr);
  }
  if (msg.edns) {
    w.U8(0);  // root name
    w.U16(static_cast<uint16_t>(RrType::kOpt));
    w.U16(msg.udp_size);
    w.U32(msg.dnssec_ok ? 0x8000 : 0);
    w.U16(0);
  }
  return std::move(w.out());
}

Message Decode(std::span<const uint8_t> wire) {
  Reader r(wire);
  Message msg;
  msg.id = r.U16();
  uint16_t flags = r.U16();
  msg.qr = flags & 0x8000;
  msg.opcode = (flags >> 11) & 0xf;
  msg.aa = flags & 0x0400;
  msg.tc = flags & 0x0200;
  msg.rd = flags & 0x0100;
  msg.ra = flags & 0x0080;
  msg.ad = flags & 0x0020;
  msg.cd = flags & 0x0010;
  msg.rcode = flags & 0xf;
  uint16_t qd = r.U16(), an = r.U16(), ns = r.U16(), ar = r.U16();
  for (int i = 0; i < qd; ++i) {
    Question q;
    q.name = r.Name();
    q.type = static_cast<RrType>(r.U16());
    q.klass = r.U16();
    msg.questions.push_back(std::move(q));
  }
  auto read_section = [&](int count, std::vector<ResourceRecord>& out,
                          bool additional) {
    for (int i = 0; i < count; ++i) {
      ResourceRecord rr;
      rr.name = r.Name();
      rr.type = static_cast<RrType>(r.U16());
      rr.klass = r.U16();
      rr.ttl = r.U32();
      uint16_t len = r.U16();
      size_t offset = r.pos();
      r.Bytes(len);
      if (additional && rr.type == RrType::kOpt) {
        msg.edns = true;
        msg.udp_size = rr.klass;
        msg.dnssec_ok = rr.ttl & 0x8000;
        continue;
      }
      DecodeRdata(wire, offset, len, rr);
      out.push_back(std::move(rr));
    }
  };
  read_section(an, msg.answers, false);
  read_section(ns, msg.authority, false);
  read_section(ar, msg.additional, true);
  return msg;
}

DnsClient::DnsClient(Endpoint server, Millis timeout, int attempts)
    : server_(std::move(server)), timeout_(timeout), attempts_(attempts) {}

QueryResult DnsClient::Query(std::string_view name,
                             RrType type,
                             bool dnssec_ok) {
  static thread_local std::mt19937 rng{std::random_device{}()};
  Message q;
  q.id = static_cast<uint16_t>(rng());
  q.rd = true;
  q.ad = dnssec_ok;
  q.edns = true;
  q.dnssec_ok = dnssec_ok;
  q.questions.push_back({ToLowerAscii(name), type, 1});
  QueryResult result;
  result.status = QueryStatus::kTimeout;
  std::optional<Message> reply;
  try {
    for (int i = 0; i < attempts_ && !reply; ++i)
      reply = Exchange(q, /*tcp=*/false);
    if (reply && reply->tc)
      reply = Exchange(q, /*tcp=*/true);
  } catch (const WireError&) {
    result.status = QueryStatus::kError;
    return result;
  }
  if (!reply)
    return result;
  result.response = std::move(*reply);
  switch (result.response.rcode) {
    case kNoError:
      result.status = QueryStatus::kOk;
      break;
    case kNxDomain:
      result.status = QueryStatus::kNxDomain;
      break;
    case kServFail:
      result.status = QueryStatus::kServFail;
      break;
    default:
      result.status = QueryStatus::kError;
  }
  return result;
}

std::optional<Message> DnsClient::Exchange(const Message& query, bool tcp) {
  std::vector<uint8_t> wire = Encode(query);
  if (tcp) {
    NetError err;
    ScopedFd fd = ConnectTcp(server_.host, server_.port, timeout_, &err);
    if (!fd.valid())
      return std::nullopt;
    std::string framed;
    framed += static_cast<char>(wire.size() >> 8);
    framed += static_cast<char>(wire.size() & 0xff);
    framed.append(wire.begin(), wire.end());
    if (!SendAll(fd.get(), framed))
      return std::nullopt;
    std::string buf;
    while (buf.size() < 2 ||
           buf.size() <
               2 + static_cast<size_t>(static_cast<uint8_t>(buf[0]) << 8 |
                                       static_cast<uint8_t>(buf[1]))) {
      auto chunk = RecvSome(fd.get(), 4096);
      if (!chunk || chunk->empty())
        return std::nullopt;
      buf += *chunk;
    }
    auto bytes = std::span<const uint8_t>(
        reinterpret_cast<const uint8_t*>(buf.data()) + 2, buf.size() - 2);
    Message reply = Decode(bytes);
    if (reply.id != query.id)
      return std::nullopt;
    return reply;
  }

  sockaddr_storage addr{};
  socklen_t len = 0;
  int family = AF_INET;
  auto* v4 = reinterpret_cast<sockaddr_in*>(&addr);
  auto* v6 = reinterpret_cast<sockaddr_in6*>(&addr);
  if (inet_pton(AF_INET, server_.host.c_str(), &v4->sin_addr) == 1) {
    v4->sin_family = AF_INET;
    v4->sin_port = htons(static_cast<uint16_t>(server_.port));
    len = sizeof(sockaddr_in);
  } else if (inet_pton(AF_INET6, server_.host.c_str(), &v6->sin6_addr) == 1) {
    family = AF_INET6;
    v6->sin6_family = AF_INET6;
    v6->sin6_port = htons(static_cast<uint16_t>(server_.port));
    len = sizeof(sockaddr_in6);
  } else {
    return std::nullopt;
  }
  ScopedFd fd(::socket(family, SOCK_DGRAM | SOCK_CLOEXEC, 0));
  if (!fd.valid() ||
      ::connect(fd.get(), reinterpret_cast<sockaddr*>(&addr), len) != 0)
    return std::nullopt;
  if (::send(fd.get(), wire.data(), wire.size(), 0) < 0)
    return std::nullopt;
  auto deadline = std::chrono::steady_clock::now() + timeout_;
  std::vector<uint8_t> buf(kMaxMessage);
  while (true) {
    auto left = std::chrono::duration_cast<Millis>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0)
      return std::nullopt;
    pollfd p{fd.get(), POLLIN, 0};
    if (::poll(&p, 1, static_cast<int>(left.count())) <= 0)
      return std::nullopt;
    ssize_t n = ::recv(fd.get(), buf.data(), buf.size(), 0);
    if (n <= 0)
      return std::nullopt;
    Message reply;
    try {
      reply = Decode({buf.data(), static_cast<size_t>(n)});
    } catch (const WireError&) {
      continue;  // ignore garbage, keep waiting for the real answer
    }
    if (reply.id == query.id && reply.qr)
      return reply;
  }
}

}  // namespace sitebench::dns
