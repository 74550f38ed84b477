#ifndef SITEBENCH_TESTS_SUPPORT_FIXTURE_WORLD_H_
#define SITEBENCH_TESTS_SUPPORT_FIXTURE_WORLD_H_

#include <memory>
#include <string>

#include "sitebench/net.h"
#include "sitebench/site_scanner.h"
#include "support/dns_stub.h"
#include "support/fixture_pki.h"
#include "support/fixture_smtp_server.h"
#include "support/fixture_web_server.h"

namespace sitebench::testing {

// Local network of fixture sites served from 127.0.0.x:
//   clean.test   passes every check
//   worst.test   fails every check that has a failing condition
//   mid.test     a mix: one missing header, no mail
//   robots.test  robots.txt disallows everything
//   plain.test   HTTP only
//   loop.test    endless redirects
//   oldmail.test MX with STARTTLS, expired certificate and legacy TLS only
// plus helper hosts (tracker, mail and name servers).
class FixtureWorld {
 public:
  static constexpr char kCleanUrl[] = "http://clean.test/";
  static constexpr char kWorstUrl[] = "https://worst.test/";
  static constexpr char kMidUrl[] = "http://mid.test/";
  static constexpr char kRobotsUrl[] = "http://robots.test/";
  static constexpr char kPlainUrl[] = "http://plain.test/";
  static constexpr char kLoopUrl[] = "http://loop.test/r0";

  FixtureWorld();
  ~FixtureWorld();

  // Network options that route every lookup and connection into the world.
  NetOptions net_options() const;
  Endpoint dns_endpoint() const { return dns_.endpoint(); }
  // Scan context with the fixture tracker filter, the shipped signatures
  // and the test geolocation table.
  ScanContext MakeScanContext() const;

  FixtureWebServer& web() { return web_; }
  FixtureSmtpServer& smtp() { return smtp_; }
  DnsStub& dns() { return dns_; }
  const std::string& trust_store() const { return pki_.trust_store_path(); }

  void ResetCounters();

  static std::string DataDir();
  static std::string TestDataDir();

 private:
  void BuildClean();
  void BuildWorst();
  void BuildMid();
  void BuildMisc();

  FixturePki pki_;
  FixtureWebServer web_;
  FixtureSmtpServer smtp_;
  DnsStub dns_;
};

}  // namespace sitebench::testing

#endif  // SITEBENCH_TESTS_SUPPORT_FIXTURE_WORLD_H_
