#include "sitebench/dns_wire.h"

#include <random>

#include <gtest/gtest.h>

#include "support/dns_stub.h"

namespace sitebench::dns {
namespace {

using testing::DnsStub;

Message SampleResponse() {
  Message m;
  m.id = 0xbeef;
  m.qr = true;
  m.aa = true;
  m.ra = true;
  m.ad = true;
  m.questions.push_back({"example.test", RrType::kMx, 1});
  m.answers.push_back(
      ResourceRecord::Mx("example.test", 10, "mx1.example.test"));
  m.answers.push_back(ResourceRecord::A("mx1.example.test", "192.0.2.7"));
  m.answers.push_back(ResourceRecord::Aaaa("mx1.example.test", "2001:db8::7"));
  m.authority.push_back(ResourceRecord::Ns("example.test", "ns.example.test"));
  m.additional.push_back(
      ResourceRecord::Txt("example.test", std::string(300, 'x')));
  m.edns = true;
  m.dnssec_ok = true;
  return m;
}

TEST(DnsWireTest, EncodeDecodeRoundTrip) {
  Message m = SampleResponse();
  Message back = Decode(Encode(m));
  EXPECT_EQ(back.id, 0xbeef);
  EXPECT_TRUE(back.qr);
  EXPECT_TRUE(back.aa);
  EXPECT_TRUE(back.ad);
  EXPECT_TRUE(back.edns);
  EXPECT_TRUE(back.dnssec_ok);
  EXPECT_EQ(back.questions, m.questions);
  ASSERT_EQ(back.answers.size(), 3u);
  EXPECT_EQ(back.answers[0].preference, 10);
  EXPECT_EQ(back.answers[0].text, "mx1.example.test");
  EXPECT_EQ(back.answers[1].text, "192.0.2.7");
  EXPECT_EQ(back.answers[2].text, "2001:db8::7");
  ASSERT_EQ(back.authority.size(), 1u);
  EXPECT_EQ(back.authority[0].text, "ns.example.test");
  ASSERT_EQ(back.additional.size(), 1u);
  // Strings longer than 255 bytes are split and joined again.
  EXPECT_EQ(back.additional[0].text, std::string(300, 'x'));
}

TEST(DnsWireTest, DecodesCompressedNamesFromHandWrittenBytes) {
  // Response to "a.test A" with one answer whose owner is a pointer to
  // offset 12 and whose class/ttl/rdata follow.
  std::vector<uint8_t> wire = {0x12, 0x34, 0x81, 0x80, 0x00, 0x01, 0x00, 0x01,
                               0x00, 0x00, 0x00, 0x00, 0x01, 'A',  0x04, 't',
                               'e',  's',  't',  0x00, 0x00, 0x01, 0x00, 0x01,
                               0xc0, 0x0c, 0x00, 0x01, 0x00, 0x01, 0x00, 0x00,
                               0x0e, 0x10, 0x00, 0x04, 0xc0, 0x00, 0x02, 0x01};
  Message m = Decode(wire);
  EXPECT_EQ(m.id, 0x1234);
  EXPECT_TRUE(m.qr);
  EXPECT_TRUE(m.rd);
  EXPECT_TRUE(m.ra);
  ASSERT_EQ(m.answers.size(), 1u);
  EXPECT_EQ(m.answers[0].name, "a.test");  // lowercased
  EXPECT_EQ(m.answers[0].ttl, 3600u);
  EXPECT_EQ(m.answers[0].text, "192.0.2.1");
}

TEST(DnsWireTest, RejectsPointerLoopsAndTruncation) {
  std::vector<uint8_t> loop = {0x00, 0x01, 0x81, 0x80, 0x00, 0x01,
                               0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
                               0xc0, 0x0c, 0x00, 0x01, 0x00, 0x01};
  EXPECT_THROW(Decode(loop), WireError);
  std::vector<uint8_t> full = Encode(SampleResponse());
  for (size_t cut :
       {size_t{0}, size_t{5}, size_t{12}, full.size() / 2, full.size() - 1}) {
    std::vector<uint8_t> part(full.begin(), full.begin() + cut);
    EXPECT_THROW(Decode(part), WireError) << "cut=" << cut;
  }
}

TEST(DnsWireTest, RejectsUnencodableNames) {
  Message m;
  m.questions.push_back({std::string(64, 'a') + ".test", RrType::kA, 1});
  EXPECT_THROW(Encode(m), WireError);
}

TEST(DnsWireTest, DecodeIsTotalOnRandomInput) {
  std::mt19937 rng(7);
  std::vector<uint8_t> base = Encode(SampleResponse());
  for (int i = 0; i < 5000; ++i) {
    std::vector<uint8_t> wire = base;
    int flips = 1 + static_cast<int>(rng() % 8);
    for (int f = 0; f < flips; ++f)
      wire[rng() % wire.size()] = static_cast<uint8_t>(rng());
    wire.resize(rng() % (wire.size() + 1));
    try {
      Decode(wire);
    } catch (const WireError&) {
    }
  }
}

class DnsClientTest : public ::testing::Test {
 protected:
  void SetUp() override {
    stub_.Add(ResourceRecord::A("host.test", "192.0.2.10"));
    stub_.Add(ResourceRecord::Txt("host.test", "v=spf1 -all"));
    stub_.Add(ResourceRecord::A("big.test", "192.0.2.11"));
    stub_.MarkTruncated("big.test");
    stub_.Add(ResourceRecord::A("slow.test", "192.0.2.12"));
    stub_.MarkSilent("slow.test");
    stub_.Add(ResourceRecord::A("signed.test", "192.0.2.13"));
    stub_.MarkValidated("signed.test");
    stub_.Start();
  }

  DnsStub stub_;
};

TEST_F(DnsClientTest, AnswersAndNxDomain) {
  DnsClient client(stub_.endpoint(), Millis(1000));
  QueryResult a = client.Query("host.test", RrType::kA, false);
  ASSERT_EQ(a.status, QueryStatus::kOk);
  ASSERT_EQ(a.response.answers.size(), 1u);
  EXPECT_EQ(a.response.answers[0].text, "192.0.2.10");
  QueryResult mx = client.Query("host.test", RrType::kMx, false);
  EXPECT_EQ(mx.status, QueryStatus::kOk);
  EXPECT_TRUE(mx.response.answers.empty());
  EXPECT_EQ(client.Query("missing.test", RrType::kA, false).status,
            QueryStatus::kNxDomain);
}

TEST_F(DnsClientTest, FallsBackToTcpOnTruncation) {
  DnsClient client(stub_.endpoint(), Millis(1000));
  QueryResult r = client.Query("big.test", RrType::kA, false);
  ASSERT_EQ(r.status, QueryStatus::kOk);
  ASSERT_EQ(r.response.answers.size(), 1u);
  EXPECT_EQ(r.response.answers[0].text, "192.0.2.11");
  EXPECT_EQ(stub_.tcp_queries(), 1);
}

TEST_F(DnsClientTest, TimesOutOnSilentServer) {
  DnsClient client(stub_.endpoint(), Millis(100), /*attempts=*/2);
  EXPECT_EQ(client.Query("slow.test", RrType::kA, false).status,
            QueryStatus::kTimeout);
  EXPECT_EQ(stub_.udp_queries(), 2);
}

TEST_F(DnsClientTest, CarriesAdFlagAndSignatures) {
  DnsClient client(stub_.endpoint(), Millis(1000));
  QueryResult r = client.Query("signed.test", RrType::kA, true);
  ASSERT_EQ(r.status, QueryStatus::kOk);
  EXPECT_TRUE(r.response.ad);
  bool has_rrsig = false;
  for (const ResourceRecord& rr : r.response.answers)
    has_rrsig |= rr.type == RrType::kRrsig;
  EXPECT_TRUE(has_rrsig);
}

}  // namespace
}  // namespace sitebench::dns
