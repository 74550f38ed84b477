#include "sitebench/storage.h"

#include <cstdlib>
#include <filesystem>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "sitebench/token.h"

namespace sitebench {
namespace {

using std::chrono::hours;

TimePoint T(int64_t s) {
  return FromUnixSeconds(1792108800 + s);
}

SiteList MakeList(std::vector<std::string> urls,
                  std::string title = "t",
                  bool is_private = false) {
  SiteList list;
  list.title = std::move(title);
  list.description = "d";
  list.tags = {"tag1"};
  list.property_schema = {"state"};
  list.access_token_hash = HashToken("secret");
  list.is_private = is_private;
  list.created_at = T(0);
  for (std::string& u : urls) {
    Site s;
    s.url = std::move(u);
    s.properties["state"] = std::nullopt;
    list.sites.push_back(std::move(s));
  }
  return list;
}

ScanRun QueuedRun(const Site& site, const std::optional<std::string>& list) {
  ScanRun run;
  run.site_ref = site.id;
  run.list_ref = list;
  run.url = site.url;
  run.status = ScanStatus::kQueued;
  return run;
}

class StorageTest : public ::testing::Test {
 protected:
  Storage store_{":memory:"};
};

TEST_F(StorageTest, ListRoundTrip) {
  SiteList list = MakeList({"https://a.example/", "https://b.example/"});
  list.sites[0].properties["state"] = "BY";
  list.tags = {"x", "y"};
  store_.CreateList(list);
  ASSERT_FALSE(list.id.empty());
  auto got = store_.GetList(list.id);
  ASSERT_TRUE(got);
  EXPECT_EQ(got->title, "t");
  EXPECT_EQ(got->tags, list.tags);
  EXPECT_EQ(got->property_schema, list.property_schema);
  EXPECT_EQ(got->access_token_hash, list.access_token_hash);
  EXPECT_EQ(got->created_at, list.created_at);
  EXPECT_EQ(got->sites, list.sites);
  EXPECT_FALSE(store_.GetList("nope"));
}

TEST_F(StorageTest, FindListsHidesPrivateAndFilters) {
  SiteList pub = MakeList({"https://a.example/"}, "German banks");
  SiteList priv = MakeList({"https://a.example/"}, "Private banks", true);
  SiteList other = MakeList({"https://c.example/"}, "Universities");
  other.tags = {"edu"};
  store_.CreateList(pub);
  store_.CreateList(priv);
  store_.CreateList(other);
  EXPECT_EQ(store_.FindLists({}).total, 2);
  ListPage banks = store_.FindLists({.q = "bank"});
  ASSERT_EQ(banks.lists.size(), 1u);
  EXPECT_EQ(banks.lists[0].id, pub.id);
  EXPECT_EQ(store_.FindLists({.q = "BANK"}).total, 1);
  EXPECT_EQ(store_.FindLists({.tag = "edu"}).total, 1);
  EXPECT_EQ(store_.FindLists({.tag = "ed"}).total, 0);
  EXPECT_EQ(store_.FindLists({.tag = "nothing"}).lists.size(), 0u);
  ListPage page = store_.FindLists({.limit = 1, .offset = 1});
  EXPECT_EQ(page.total, 2);
  EXPECT_EQ(page.lists.size(), 1u);
  EXPECT_TRUE(page.lists[0].sites.empty());
}

TEST_F(StorageTest, FindListsTreatsQueryLiterally) {
  SiteList list = MakeList({"https://a.example/"}, "100% open_data");
  store_.CreateList(list);
  EXPECT_EQ(store_.FindLists({.q = "0% o"}).total, 1);
  EXPECT_EQ(store_.FindLists({.q = "%"}).total, 1);
  EXPECT_EQ(store_.FindLists({.q = "_d"}).total, 1);
  EXPECT_EQ(store_.FindLists({.q = "x%"}).total, 0);
}

TEST_F(StorageTest, UpdateListKeepsSurvivingSites) {
  SiteList list = MakeList({"https://a.example/", "https://b.example/"});
  store_.CreateList(list);
  std::string a_id = list.sites[0].id;
  ScanRun run = QueuedRun(list.sites[1], list.id);
  store_.InsertRun(run, T(0), 0);

  list.title = "renamed";
  list.sites.erase(list.sites.begin() + 1);
  Site c;
  c.url = "https://c.example/";
  c.properties["state"] = "HE";
  list.sites.push_back(c);
  store_.UpdateList(list);

  auto got = store_.GetList(list.id);
  ASSERT_TRUE(got);
  EXPECT_EQ(got->title, "renamed");
  ASSERT_EQ(got->sites.size(), 2u);
  EXPECT_EQ(got->sites[0].id, a_id);
  EXPECT_EQ(got->sites[1].url, "https://c.example/");
  EXPECT_EQ(got->sites[1].properties.at("state"), "HE");
  EXPECT_FALSE(store_.GetRun(run.id));
}

TEST_F(StorageTest, DeleteListCascades) {
  SiteList list = MakeList({"https://a.example/"});
  store_.CreateList(list);
  ScanRun run = QueuedRun(list.sites[0], list.id);
  store_.InsertRun(run, T(0), 0);
  EXPECT_TRUE(store_.DeleteList(list.id));
  EXPECT_FALSE(store_.DeleteList(list.id));
  EXPECT_FALSE(store_.GetList(list.id));
  EXPECT_FALSE(store_.GetSite(list.sites[0].id));
  EXPECT_FALSE(store_.GetRun(run.id));
}

TEST_F(StorageTest, UnlistedSitesAreReused) {
  Site a = store_.UnlistedSite("https://a.example/");
  Site again = store_.UnlistedSite("https://a.example/");
  EXPECT_EQ(a.id, again.id);
  auto stored = store_.GetSite(a.id);
  ASSERT_TRUE(stored);
  EXPECT_FALSE(stored->list_ref);
}

TEST_F(StorageTest, JobLifecycle) {
  Site site = store_.UnlistedSite("https://a.example/");
  ScanRun run = QueuedRun(site, std::nullopt);
  store_.InsertRun(run, T(0), 0);
  auto active = store_.ActiveJobForSite(site.id);
  ASSERT_TRUE(active);
  EXPECT_EQ(active->id, run.id);
  EXPECT_EQ(active->host, "a.example");
  EXPECT_TRUE(store_.HasActiveJobForHost("a.example"));

  EXPECT_FALSE(store_.ClaimNext(T(1), [](const ScanJob&) { return false; }));
  auto claimed = store_.ClaimNext(T(1), [](const ScanJob&) { return true; });
  ASSERT_TRUE(claimed);
  EXPECT_EQ(claimed->state, ScanStatus::kRunning);
  EXPECT_EQ(claimed->attempts, 1);
  EXPECT_FALSE(store_.ClaimNext(T(1), [](const ScanJob&) { return true; }));
  EXPECT_EQ(store_.LastStartPerHost().at("a.example"), T(1));

  run.status = ScanStatus::kDone;
  run.finished_at = T(2);
  run.check_results = {
      {"spf", CheckGroup::kEncMail, Outcome::kPass, false, "-all"}};
  run.facts.content.emplace().final_url = "https://a.example/home";
  store_.CompleteRun(run);
  EXPECT_THROW(store_.CompleteRun(run), StorageError);
  EXPECT_FALSE(store_.ActiveJobForSite(site.id));
  auto latest = store_.LatestDoneRun(site.id);
  ASSERT_TRUE(latest);
  EXPECT_EQ(latest->check_results, run.check_results);
  EXPECT_EQ(latest->started_at, T(1));
  EXPECT_EQ(latest->finished_at, T(2));
  EXPECT_EQ(store_.GetSite(site.id)->site.final_url, "https://a.example/home");
}

TEST_F(StorageTest, LatestDoneRunIsNewest) {
  Site site = store_.UnlistedSite("https://a.example/");
  for (int i = 0; i < 2; ++i) {
    ScanRun run = QueuedRun(site, std::nullopt);
    run.status = ScanStatus::kDone;
    run.started_at = T(10 * i);
    run.finished_at = T(10 * i + 1);
    run.note = "run" + std::to_string(i);
    store_.InsertRun(run, T(10 * i), 1);
  }
  ScanRun failed = QueuedRun(site, std::nullopt);
  failed.status = ScanStatus::kFailed;
  store_.InsertRun(failed, T(30), 1);
  EXPECT_EQ(store_.LatestDoneRun(site.id)->note, "run1");
  auto history = store_.RunHistory(site.id);
  ASSERT_EQ(history.size(), 3u);
  EXPECT_EQ(history[0].note, "run0");
  EXPECT_EQ(history[2].status, ScanStatus::kFailed);
}

TEST_F(StorageTest, RequeueStaleRespectsAttemptLimit) {
  Site a = store_.UnlistedSite("https://a.example/");
  Site b = store_.UnlistedSite("https://b.example/");
  ScanRun ra = QueuedRun(a, std::nullopt);
  ScanRun rb = QueuedRun(b, std::nullopt);
  store_.InsertRun(ra, T(0), 0);
  store_.InsertRun(rb, T(0), 1);
  auto all = [](const ScanJob&) { return true; };
  store_.ClaimNext(T(0), all);
  store_.ClaimNext(T(0), all);
  EXPECT_EQ(store_.RequeueStale(T(0), 2), 0);
  EXPECT_EQ(store_.RequeueStale(T(1), 2), 2);
  EXPECT_EQ(store_.GetJob(ra.id)->state, ScanStatus::kQueued);
  EXPECT_EQ(store_.GetJob(rb.id)->state, ScanStatus::kFailed);
  EXPECT_EQ(store_.GetJob(rb.id)->attempts, 2);
}

TEST_F(StorageTest, SitesDueForRescan) {
  SiteList old_list = MakeList({"https://old.example/"});
  SiteList fresh_list = MakeList({"https://fresh.example/"});
  SiteList never_list = MakeList({"https://never.example/"});
  SiteList off_list = MakeList({"https://off.example/"});
  off_list.rescan_enabled = false;
  for (SiteList* l : {&old_list, &fresh_list, &never_list, &off_list})
    store_.CreateList(*l);
  TimePoint now = T(0) + hours(24 * 30);
  auto finish = [&](const SiteList& l, TimePoint at) {
    ScanRun run = QueuedRun(l.sites[0], l.id);
    run.status = ScanStatus::kDone;
    run.started_at = at;
    run.finished_at = at;
    store_.InsertRun(run, at, 1);
  };
  finish(old_list, now - hours(24 * 8));
  finish(fresh_list, now - hours(24));
  finish(off_list, now - hours(24 * 8));
  auto due = store_.SitesDueForRescan(now - hours(24 * 7));
  std::set<std::string> urls;
  for (const StoredSite& s : due)
    urls.insert(s.site.url);
  EXPECT_EQ(urls, (std::set<std::string>{"https://old.example/",
                                         "https://never.example/"}));
  // A queued job suppresses a second one.
  ScanRun queued = QueuedRun(never_list.sites[0], never_list.id);
  store_.InsertRun(queued, now, 0);
  EXPECT_EQ(store_.SitesDueForRescan(now - hours(24 * 7)).size(), 1u);
}

TEST_F(StorageTest, ConcurrentClaimsNeverShareAJob) {
  std::vector<std::string> ids;
  for (int i = 0; i < 200; ++i) {
    Site s = store_.UnlistedSite("https://s" + std::to_string(i) + ".example/");
    ScanRun run = QueuedRun(s, std::nullopt);
    ids.push_back(store_.InsertRun(run, T(0), 0));
  }
  std::mutex mu;
  std::multiset<std::string> claimed;
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&] {
      while (auto job =
                 store_.ClaimNext(T(1), [](const ScanJob&) { return true; })) {
        std::lock_guard lock(mu);
        claimed.insert(job->id);
      }
    });
  }
  for (auto& t : threads)
    t.join();
  EXPECT_EQ(claimed.size(), 200u);
  EXPECT_EQ(std::set<std::string>(claimed.begin(), claimed.end()).size(), 200u);
}

TEST(StorageFileTest, SurvivesReopen) {
  char tmpl[] = "/tmp/storage-XXXXXX";
  std::filesystem::path dir = mkdtemp(tmpl);
  std::string path = (dir / "db.sqlite").string();
  std::string id;
  {
    Storage store(path);
    SiteList list = MakeList({"https://a.example/"});
    store.CreateList(list);
    id = list.id;
  }
  {
    Storage store(path);
    EXPECT_TRUE(store.GetList(id));
  }
  std::filesystem::remove_all(dir);
  EXPECT_THROW(Storage("/nonexistent-dir/x/db.sqlite"), StorageError);
}

}  // namespace
}  // namespace sitebench
