#include "sitebench/api_service.h"

#include <httplib.h>

#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include <gtest/gtest.h>

#include "sitebench/csv.h"
#include "sitebench/openapi.h"
#include "sitebench/url.h"
#include "support/fixture_world.h"

namespace sitebench {
namespace {

using testing::FixtureWorld;

// One result per group; 'g' pass, 'y' non-critical fail, 'r' critical fail,
// 'n' neutral, in NoTrack, Attacks, EncWeb, EncMail order.
std::vector<CheckResult> Scripted(const std::string& colors) {
  std::vector<CheckResult> out;
  for (size_t i = 0; i < kAllGroups.size(); ++i) {
    CheckResult r;
    r.check_id = "c" + std::to_string(i);
    r.group = kAllGroups[i];
    switch (colors[i]) {
      case 'g':
        r.outcome = Outcome::kPass;
        break;
      case 'y':
        r.outcome = Outcome::kFail;
        break;
      case 'r':
        r.outcome = Outcome::kFail;
        r.critical = true;
        break;
      default:
        r.outcome = Outcome::kNeutral;
        break;
    }
    out.push_back(r);
  }
  return out;
}

class ScriptedScanner : public JobScanner {
 public:
  SiteScanOutput Scan(const std::string& url) override {
    std::lock_guard lock(mu_);
    ++scans_;
    SiteScanOutput out;
    out.reachable = true;
    auto it = script_.find(HostOf(url));
    out.results = Scripted(it == script_.end() ? "gggg" : it->second);
    return out;
  }
  RobotsVerdict Robots(const std::string&, bool) override {
    return RobotsVerdict::kAllow;
  }
  void Set(const std::string& host, const std::string& colors) {
    std::lock_guard lock(mu_);
    script_[host] = colors;
  }
  int scans() {
    std::lock_guard lock(mu_);
    return scans_;
  }

 private:
  std::mutex mu_;
  std::map<std::string, std::string> script_;
  int scans_ = 0;
};

httplib::Headers Bearer(const std::string& token) {
  return {{"Authorization", "Bearer " + token}};
}

class ApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    scanner_.Set("a.test", "gggg");
    scanner_.Set("b.test", "gygg");
    scanner_.Set("c.test", "rggg");
    scanner_.Set("d.test", "ggyn");
    ASSERT_TRUE(server_.Start("127.0.0.1", 0));
    client_ = std::make_unique<httplib::Client>("127.0.0.1", server_.port());
  }

  Json Body(const httplib::Result& r) {
    EXPECT_TRUE(r);
    return Json::parse(r->body);
  }

  // Creates a list of a..d.test and returns {list_id, token}.
  std::pair<std::string, std::string> CreateList(bool is_private) {
    Json body = {
        {"title", "Universities"},
        {"description", "test list"},
        {"tags", {"edu", "de"}},
        {"private", is_private},
        {"sites",
         {{{"url", "https://a.test/"}, {"properties", {{"state", "BY"}}}},
          {{"url", "https://b.test/"}, {"properties", {{"state", "BE"}}}},
          "https://c.test/",
          {{"url", "https://d.test/"}, {"properties", {{"state", "HH"}}}}}}};
    auto r = client_->Post("/api/v1/lists", body.dump(), "application/json");
    EXPECT_EQ(r->status, 201) << r->body;
    Json j = Json::parse(r->body);
    return {j["list_id"], j["token"]};
  }

  std::vector<std::string> RankedUrls(const Json& ranking) {
    std::vector<std::string> out;
    for (const Json& row : ranking["rows"])
      out.push_back(row["site"]["url"]);
    return out;
  }

  Storage store_{":memory:"};
  Blacklist blacklist_;
  ScriptedScanner scanner_;
  ManualClock clock_;
  Orchestrator orch_{store_, blacklist_, scanner_, clock_};
  ApiService service_{store_, orch_, blacklist_, CheckCatalog::Default(),
                      clock_};
  ApiServer server_{service_};
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ApiTest, CreateQueuesEverySiteAndReturnsTokenOnce) {
  auto [id, token] = CreateList(false);
  EXPECT_EQ(token.size(), 43u);
  EXPECT_EQ(store_.CountJobs(ScanStatus::kQueued), 4);
  Json list = Body(client_->Get("/api/v1/lists/" + id));
  EXPECT_EQ(list["site_count"], 4);
  EXPECT_FALSE(list.contains("token"));
  EXPECT_EQ(list["property_schema"], Json({"state"}));
  // The schema-less site gets an explicit null.
  EXPECT_TRUE(list["sites"][2]["properties"]["state"].is_null());
}

TEST_F(ApiTest, CreateFromCsvBody) {
  std::string csv = "url,state\r\nhttps://a.test/,BY\r\nhttps://b.test/,\r\n";
  auto r = client_->Post("/api/v1/lists?title=Csv&tags=x,y&private=true", csv,
                         "text/csv");
  ASSERT_EQ(r->status, 201) << r->body;
  Json j = Json::parse(r->body);
  EXPECT_EQ(j["list"]["title"], "Csv");
  EXPECT_EQ(j["list"]["tags"], Json({"x", "y"}));
  EXPECT_TRUE(j["list"]["private"]);
  EXPECT_TRUE(j["list"]["sites"][1]["properties"]["state"].is_null());
}

TEST_F(ApiTest, CreateRejectsBadInput) {
  auto post = [&](const std::string& body, const std::string& type) {
    return client_->Post("/api/v1/lists", body, type.c_str())->status;
  };
  EXPECT_EQ(post("{", "application/json"), 400);
  EXPECT_EQ(post(R"({"title":"x"})", "application/json"), 400);
  EXPECT_EQ(post(R"({"sites":["ftp://a.test/"]})", "application/json"), 400);
  EXPECT_EQ(post(R"({"sites":[]})", "application/json"), 422);
  EXPECT_EQ(post(R"({"sites":["https://a.test","https://A.test/"]})",
                 "application/json"),
            422);
  EXPECT_EQ(post("name\r\nx\r\n", "text/csv"), 400);
  EXPECT_EQ(post("url\r\n", "text/csv"), 422);
  EXPECT_EQ(store_.CountJobs(ScanStatus::kQueued), 0);
}

TEST_F(ApiTest, TokenMatrix) {
  auto [id, token] = CreateList(true);
  std::string path = "/api/v1/lists/" + id;
  // Reads of a private list.
  for (std::string p :
       {path, path + "/ranking", "/api/v1/export/lists/" + id + ".json",
        "/api/v1/export/lists/" + id + ".csv"}) {
    EXPECT_EQ(client_->Get(p)->status, 403) << p;
    EXPECT_EQ(client_->Get(p, Bearer("wrong"))->status, 403) << p;
    EXPECT_EQ(client_->Get(p, Bearer(token))->status, 200) << p;
  }
  // Writes of any list.
  EXPECT_EQ(client_->Post(path + "/scan")->status, 403);
  EXPECT_EQ(client_->Post(path + "/scan", Bearer("wrong"), "", "")->status,
            403);
  EXPECT_EQ(client_->Post(path + "/scan", Bearer(token), "", "")->status, 202);
  std::string update = R"({"title":"Renamed"})";
  EXPECT_EQ(client_->Put(path, update, "application/json")->status, 403);
  EXPECT_EQ(
      client_->Put(path, Bearer("wrong"), update, "application/json")->status,
      403);
  EXPECT_EQ(
      client_->Put(path, Bearer(token), update, "application/json")->status,
      200);
  EXPECT_EQ(client_->Delete(path)->status, 403);
  EXPECT_EQ(client_->Delete(path, Bearer("wrong"))->status, 403);
  EXPECT_EQ(client_->Delete(path, Bearer(token))->status, 200);
  // Unknown ids are 404 regardless of the token.
  EXPECT_EQ(client_->Get(path, Bearer(token))->status, 404);
  EXPECT_EQ(client_->Delete(path)->status, 404);
}

TEST_F(ApiTest, SiteResultsOfPrivateListNeedToken) {
  auto [id, token] = CreateList(true);
  orch_.RunUntilIdle();
  Json list =
      Json::parse(client_->Get("/api/v1/lists/" + id, Bearer(token))->body);
  std::string site = list["sites"][0]["id"];
  std::string path = "/api/v1/sites/" + site + "/results";
  EXPECT_EQ(client_->Get(path)->status, 403);
  EXPECT_EQ(client_->Get(path, Bearer(token))->status, 200);
  EXPECT_EQ(client_->Get("/api/v1/sites/nope/results")->status, 404);
}

TEST_F(ApiTest, UpdateKeepsAbsentFieldsAndQueuesNewSites) {
  auto [id, token] = CreateList(false);
  orch_.RunUntilIdle();
  Json update = {{"sites", {"https://a.test/", "https://e.test/"}}};
  auto r = client_->Put("/api/v1/lists/" + id, Bearer(token), update.dump(),
                        "application/json");
  ASSERT_EQ(r->status, 200) << r->body;
  Json list = Json::parse(r->body);
  EXPECT_EQ(list["title"], "Universities");
  EXPECT_EQ(list["site_count"], 2);
  EXPECT_EQ(store_.CountJobs(ScanStatus::kQueued), 1);
}

TEST_F(ApiTest, SearchListsPublicOnly) {
  CreateList(false);
  clock_.Advance(std::chrono::seconds(1));
  CreateList(true);
  clock_.Advance(std::chrono::seconds(1));
  Json body = {
      {"title", "Banks"}, {"tags", {"fin"}}, {"sites", {"https://z.test/"}}};
  client_->Post("/api/v1/lists", body.dump(), "application/json");

  Json all = Body(client_->Get("/api/v1/lists"));
  EXPECT_EQ(all["total"], 2);
  EXPECT_EQ(all["lists"][0]["title"], "Banks");
  EXPECT_EQ(Body(client_->Get("/api/v1/lists?q=UNIVERS"))["total"], 1);
  EXPECT_EQ(Body(client_->Get("/api/v1/lists?tag=fin"))["total"], 1);
  EXPECT_EQ(Body(client_->Get("/api/v1/lists?tag=fi"))["total"], 0);
  Json page = Body(client_->Get("/api/v1/lists?limit=1&offset=1"));
  EXPECT_EQ(page["total"], 2);
  ASSERT_EQ(page["lists"].size(), 1u);
  EXPECT_EQ(page["lists"][0]["title"], "Universities");
  EXPECT_EQ(client_->Get("/api/v1/lists?limit=0")->status, 400);
  EXPECT_EQ(client_->Get("/api/v1/lists?limit=abc")->status, 400);
  EXPECT_EQ(client_->Get("/api/v1/lists?offset=-1")->status, 400);
}

TEST_F(ApiTest, RankingFollowsGroupOrder) {
  auto [id, token] = CreateList(false);
  std::string path = "/api/v1/lists/" + id + "/ranking";
  Json before = Body(client_->Get(path));
  for (const Json& row : before["rows"])
    EXPECT_TRUE(row["overall"].is_null());
  EXPECT_EQ(orch_.RunUntilIdle(), 4);

  // a gggg, b gygg, c rggg, d ggyn.
  Json def = Body(client_->Get(path));
  EXPECT_EQ(RankedUrls(def),
            (std::vector<std::string>{"https://a.test/", "https://d.test/",
                                      "https://b.test/", "https://c.test/"}));
  EXPECT_EQ(def["rows"][0]["rank"], 1);
  EXPECT_EQ(def["rows"][3]["group_ratings"]["NoTrack"], "red");
  EXPECT_EQ(def["stats"]["NoTrack"]["red"], 1);
  EXPECT_EQ(def["stats"]["NoTrack"]["green"], 3);

  Json enc = Body(client_->Get(path + "?order=EncWeb,EncMail,NoTrack,Attacks"));
  EXPECT_EQ(enc["order"], "EncWeb,EncMail,NoTrack,Attacks");
  EXPECT_EQ(RankedUrls(enc),
            (std::vector<std::string>{"https://a.test/", "https://b.test/",
                                      "https://c.test/", "https://d.test/"}));
  EXPECT_EQ(client_->Get(path + "?order=EncWeb,EncWeb,NoTrack,Attacks")->status,
            400);
  EXPECT_EQ(client_->Get(path + "?order=EncWeb")->status, 400);
}

TEST_F(ApiTest, SingleSiteScanIsRateLimited) {
  Json body = {{"url", "https://solo.test/page"}};
  auto first = client_->Post("/api/v1/scan", body.dump(), "application/json");
  ASSERT_EQ(first->status, 202) << first->body;
  std::string run_id = Json::parse(first->body)["run_id"];

  // Queued job for the host.
  auto queued = client_->Post("/api/v1/scan", body.dump(), "application/json");
  EXPECT_EQ(queued->status, 429);
  EXPECT_TRUE(queued->has_header("Retry-After"));

  EXPECT_EQ(orch_.RunUntilIdle(), 1);
  Json run = Body(client_->Get("/api/v1/runs/" + run_id));
  EXPECT_EQ(run["status"], "done");
  EXPECT_TRUE(run["list_id"].is_null());

  // Within the per-host interval, also for another path on the host.
  clock_.Advance(std::chrono::minutes(5));
  Json other = {{"url", "https://solo.test/other"}};
  auto recent = client_->Post("/api/v1/scan", other.dump(), "application/json");
  EXPECT_EQ(recent->status, 429);
  EXPECT_EQ(recent->get_header_value("Retry-After"), "300");

  clock_.Advance(std::chrono::minutes(6));
  EXPECT_EQ(
      client_->Post("/api/v1/scan", body.dump(), "application/json")->status,
      202);
  EXPECT_EQ(client_->Post("/api/v1/scan", "{}", "application/json")->status,
            400);
  EXPECT_EQ(
      client_->Post("/api/v1/scan", R"({"url":"ftp://x"})", "application/json")
          ->status,
      400);
  EXPECT_EQ(client_->Get("/api/v1/runs/missing")->status, 404);
}

TEST_F(ApiTest, BlacklistedSiteIsAnnotated) {
  auto [id, token] = CreateList(false);
  orch_.RunUntilIdle();
  blacklist_.Add("b.test", "owner request");
  Json list = Body(client_->Get("/api/v1/lists/" + id));
  std::string site = list["sites"][1]["id"];
  Json results = Body(client_->Get("/api/v1/sites/" + site + "/results"));
  EXPECT_TRUE(results["annotation"].is_string());
  EXPECT_EQ(results["run"]["status"], "done");

  int scans = scanner_.scans();
  clock_.Advance(std::chrono::hours(1));
  client_->Post("/api/v1/lists/" + id + "/scan", Bearer(token), "", "");
  orch_.RunUntilIdle();
  EXPECT_EQ(scanner_.scans(), scans + 3);
  results = Body(client_->Get("/api/v1/sites/" + site + "/results"));
  EXPECT_EQ(results["history"].back()["status"], "blacklisted");
  EXPECT_EQ(results["history"].size(), 2u);

  std::string a = list["sites"][0]["id"];
  EXPECT_TRUE(
      Body(client_->Get("/api/v1/sites/" + a + "/results"))["annotation"]
          .is_null());
}

TEST_F(ApiTest, CsvExportHasOneColumnPerCheck) {
  auto [id, token] = CreateList(false);
  orch_.RunUntilIdle();
  auto r = client_->Get("/api/v1/export/lists/" + id + ".csv");
  ASSERT_EQ(r->status, 200);
  EXPECT_EQ(r->get_header_value("Content-Type"), "text/csv");
  std::vector<CsvRow> rows = ParseCsv(r->body);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0].size(), 8 + CheckCatalog::Default().size());
  EXPECT_EQ(rows[0][0], "url");
  EXPECT_EQ(rows[0][8], CheckCatalog::Default().entries()[0].id);
  EXPECT_EQ(rows[1][0], "https://a.test/");
  EXPECT_EQ(rows[1][3], "green");
  EXPECT_EQ(rows[4][0], "https://c.test/");
  EXPECT_EQ(rows[4][3], "red");
  EXPECT_EQ(rows[4][4], "red");
  for (const CsvRow& row : rows)
    EXPECT_EQ(row.size(), rows[0].size());
}

TEST_F(ApiTest, ExportImportPreservesRanking) {
  auto [id, token] = CreateList(true);
  orch_.RunUntilIdle();
  std::string order = "?order=Attacks,EncMail,EncWeb,NoTrack";
  auto exported = client_->Get("/api/v1/export/lists/" + id + ".json" + order,
                               Bearer(token));
  ASSERT_EQ(exported->status, 200);
  Json doc = Json::parse(exported->body);
  EXPECT_EQ(doc["format"], kExportFormat);

  auto imported =
      client_->Post("/api/v1/import", exported->body, "application/json");
  ASSERT_EQ(imported->status, 201) << imported->body;
  Json created = Json::parse(imported->body);
  std::string new_id = created["list_id"];
  std::string new_token = created["token"];
  EXPECT_NE(new_id, id);
  EXPECT_NE(new_token, token);
  EXPECT_TRUE(created["list"]["private"]);

  Json a = Body(
      client_->Get("/api/v1/lists/" + id + "/ranking" + order, Bearer(token)));
  Json b = Body(client_->Get("/api/v1/lists/" + new_id + "/ranking" + order,
                             Bearer(new_token)));
  ASSERT_EQ(a["rows"].size(), b["rows"].size());
  for (size_t i = 0; i < a["rows"].size(); ++i) {
    EXPECT_EQ(a["rows"][i]["site"]["url"], b["rows"][i]["site"]["url"]);
    EXPECT_EQ(a["rows"][i]["site"]["properties"],
              b["rows"][i]["site"]["properties"]);
    EXPECT_EQ(a["rows"][i]["group_ratings"], b["rows"][i]["group_ratings"]);
    EXPECT_EQ(a["rows"][i]["scanned_at"], b["rows"][i]["scanned_at"]);
  }
  Json again =
      Json::parse(client_
                      ->Get("/api/v1/export/lists/" + new_id + ".json" + order,
                            Bearer(new_token))
                      ->body);
  EXPECT_EQ(again["ranking"].size(), doc["ranking"].size());
  for (size_t i = 0; i < doc["ranking"].size(); ++i) {
    EXPECT_EQ(again["ranking"][i]["url"], doc["ranking"][i]["url"]);
    EXPECT_EQ(again["ranking"][i]["group_ratings"],
              doc["ranking"][i]["group_ratings"]);
  }
  // Imported runs are not queued again.
  EXPECT_EQ(store_.CountJobs(ScanStatus::kQueued), 0);

  EXPECT_EQ(client_->Post("/api/v1/import", "{}", "application/json")->status,
            400);
  Json wrong = doc;
  wrong["version"] = 99;
  EXPECT_EQ(
      client_->Post("/api/v1/import", wrong.dump(), "application/json")->status,
      400);
}

TEST_F(ApiTest, CatalogAndOpenApiServed) {
  Json catalog = Body(client_->Get("/api/v1/catalog"));
  EXPECT_EQ(catalog["checks"].size(), CheckCatalog::Default().size());
  Json served = Body(client_->Get("/api/v1/openapi.json"));
  EXPECT_EQ(served, OpenApiSpec());
  EXPECT_EQ(client_->Get("/api/v1/nothing")->status, 404);
  EXPECT_TRUE(Body(client_->Get("/api/v1/nothing")).contains("error"));
}

TEST(OpenApiTest, DocsFileMatchesGeneratedDocument) {
  std::ifstream in(std::string(SITEBENCH_SOURCE_DIR) + "/docs/openapi.json");
  ASSERT_TRUE(in) << "docs/openapi.json missing";
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(Json::parse(text.str()), OpenApiSpec())
      << "regenerate with: sitebench openapi > docs/openapi.json";
}

TEST(OpenApiTest, EveryResponseIsDescribed) {
  const Json& doc = OpenApiSpec();
  int operations = 0;
  for (const auto& [path, item] : doc["paths"].items()) {
    EXPECT_EQ(path.rfind("/api/v1/", 0), 0u) << path;
    for (const auto& [method, op] : item.items()) {
      if (method == "parameters")
        continue;
      ++operations;
      EXPECT_TRUE(op.contains("summary")) << path << " " << method;
      for (const auto& [code, response] : op["responses"].items())
        EXPECT_TRUE(response.contains("description")) << path << " " << code;
    }
  }
  EXPECT_EQ(operations, 15);
}

// CSV upload, real scans of fixture sites, export and re-import.
class ApiFixtureTest : public ::testing::Test {
 protected:
  FixtureWorld world_;
  NetworkJobScanner scanner_{world_.MakeScanContext()};
  Storage store_{":memory:"};
  Blacklist blacklist_;
  ManualClock clock_;
  Orchestrator orch_{store_, blacklist_, scanner_, clock_};
  ApiService service_{store_, orch_, blacklist_, CheckCatalog::Default(),
                      clock_};
};

TEST_F(ApiFixtureTest, CsvScanExportImportRoundTrip) {
  ApiServer server(service_);
  ASSERT_TRUE(server.Start("127.0.0.1", 0));
  httplib::Client client("127.0.0.1", server.port());
  client.set_read_timeout(std::chrono::seconds(60));
  std::string csv = std::string("url,kind\r\n") + FixtureWorld::kWorstUrl +
                    ",worst\r\n" + FixtureWorld::kMidUrl + ",mid\r\n" +
                    FixtureWorld::kCleanUrl + ",clean\r\n";
  auto created = client.Post("/api/v1/lists?title=Fixture", csv, "text/csv");
  ASSERT_EQ(created->status, 201) << created->body;
  std::string id = Json::parse(created->body)["list_id"];
  EXPECT_EQ(orch_.RunUntilIdle(), 3);

  Json ranking =
      Json::parse(client.Get("/api/v1/lists/" + id + "/ranking")->body);
  std::vector<std::string> urls;
  for (const Json& row : ranking["rows"])
    urls.push_back(row["site"]["properties"]["kind"]);
  EXPECT_EQ(urls, (std::vector<std::string>{"clean", "mid", "worst"}));
  EXPECT_EQ(ranking["rows"][0]["overall"], "green");
  EXPECT_EQ(ranking["rows"][2]["overall"], "red");

  auto exported = client.Get("/api/v1/export/lists/" + id + ".json");
  auto imported =
      client.Post("/api/v1/import", exported->body, "application/json");
  ASSERT_EQ(imported->status, 201);
  std::string new_id = Json::parse(imported->body)["list_id"];
  Json again =
      Json::parse(client.Get("/api/v1/lists/" + new_id + "/ranking")->body);
  ASSERT_EQ(again["rows"].size(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(again["rows"][i]["site"]["url"],
              ranking["rows"][i]["site"]["url"]);
    EXPECT_EQ(again["rows"][i]["group_ratings"],
              ranking["rows"][i]["group_ratings"]);
  }
  // Per-check results survive the round trip.
  std::string old_site = ranking["rows"][2]["site"]["id"];
  std::string new_site = again["rows"][2]["site"]["id"];
  Json old_results =
      Json::parse(client.Get("/api/v1/sites/" + old_site + "/results")->body);
  Json new_results =
      Json::parse(client.Get("/api/v1/sites/" + new_site + "/results")->body);
  EXPECT_EQ(old_results["run"]["checks"], new_results["run"]["checks"]);
}

}  // namespace
}  // namespace sitebench
