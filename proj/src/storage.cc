#include "sitebench/storage.h"

#include <sqlite3.h>

#include <set>

#include "sitebench/json_codec.h"
#include "sitebench/token.h"
#include "sitebench/url.h"

namespace sitebench {

namespace {

constexpr char kSchema[] = R"sql(
CREATE TABLE IF NOT EXISTS lists(
  id TEXT PRIMARY KEY,
  title TEXT NOT NULL,
  description TEXT NOT NULL,
  tags TEXT NOT NULL,
  property_schema TEXT NOT NULL,
  token_hash TEXT NOT NULL,
  private INTEGER NOT NULL,
  rescan INTEGER NOT NULL,
  honor_robots INTEGER NOT NULL,
  created_at INTEGER NOT NULL);
CREATE TABLE IF NOT EXISTS sites(
  id TEXT PRIMARY KEY,
  list_id TEXT REFERENCES lists(id) ON DELETE CASCADE,
  position INTEGER NOT NULL,
  url TEXT NOT NULL,
  final_url TEXT,
  properties TEXT NOT NULL);
CREATE INDEX IF NOT EXISTS sites_by_list ON sites(list_id, position);
CREATE UNIQUE INDEX IF NOT EXISTS unlisted_sites ON sites(url)
  WHERE list_id IS NULL;
CREATE TABLE IF NOT EXISTS runs(
  seq INTEGER PRIMARY KEY AUTOINCREMENT,
  id TEXT NOT NULL UNIQUE,
  site_id TEXT NOT NULL REFERENCES sites(id) ON DELETE CASCADE,
  list_id TEXT,
  url TEXT NOT NULL,
  host TEXT NOT NULL,
  status TEXT NOT NULL,
  attempts INTEGER NOT NULL,
  enqueued_at INTEGER NOT NULL,
  started_at INTEGER,
  finished_at INTEGER,
  facts TEXT,
  results TEXT,
  module_errors TEXT,
  note TEXT NOT NULL DEFAULT '');
CREATE INDEX IF NOT EXISTS runs_by_site ON runs(site_id, seq);
CREATE INDEX IF NOT EXISTS runs_by_status ON runs(status, seq);
)sql";

class Stmt {
 public:
  Stmt(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK)
      throw StorageError(std::string("prepare failed: ") + sqlite3_errmsg(db));
  }
  ~Stmt() { sqlite3_finalize(stmt_); }
  Stmt(const Stmt&) = delete;
  Stmt& operator=(const Stmt&) = delete;

  Stmt& Bind(int i, const std::string& v) {
    Check(sqlite3_bind_text(stmt_, i, v.data(), static_cast<int>(v.size()),
                            SQLITE_TRANSIENT));
    return *this;
  }
  Stmt& Bind(int i, const char* v) { return Bind(i, std::string(v)); }
  Stmt& Bind(int i, int64_t v) {
    Check(sqlite3_bind_int64(stmt_, i, v));
    return *this;
  }
  Stmt& Bind(int i, int v) { return Bind(i, static_cast<int64_t>(v)); }
  Stmt& Bind(int i, bool v) { return Bind(i, static_cast<int64_t>(v)); }
  Stmt& Bind(int i, const std::optional<std::string>& v) {
    if (v)
      return Bind(i, *v);
    Check(sqlite3_bind_null(stmt_, i));
    return *this;
  }
  Stmt& Bind(int i, const std::optional<int64_t>& v) {
    if (v)
      return Bind(i, *v);
    Check(sqlite3_bind_null(stmt_, i));
    return *this;
  }

  // True while rows are produced.
  bool Step() {
    int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW)
      return true;
    if (rc == SQLITE_DONE)
      return false;
    throw StorageError(std::string("step failed: ") + sqlite3_errmsg(db_));
  }
  void Run() {
    while (Step()) {
    }
  }

  bool IsNull(int col) const {
    return sqlite3_column_type(stmt_, col) == SQLITE_NULL;
  }
  std::string Text(int col) const {
    const unsigned char* p = sqlite3_column_text(stmt_, col);
    return p ? std::string(reinterpret_cast<const char*>(p),
                           sqlite3_column_bytes(stmt_, col))
             : std::string();
  }
  std::optional<std::string> OptText(int col) const {
    if (IsNull(col))
      return std::nullopt;
    return Text(col);
  }
  int64_t Int(int col) const { return sqlite3_column_int64(stmt_, col); }

 private:
  void Check(int rc) {
    if (rc != SQLITE_OK)
      throw StorageError(std::string("bind failed: ") + sqlite3_errmsg(db_));
  }

  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

class Transaction {
 public:
  explicit Transaction(sqlite3* db) : db_(db) { Exec("BEGIN IMMEDIATE"); }
  ~Transaction() {
    if (!done_)
      sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
  }
  void Commit() {
    Exec("COMMIT");
    done_ = true;
  }

 private:
  void Exec(const char* sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "unknown error";
      sqlite3_free(err);
      throw StorageError(std::string(sql) + ": " + msg);
    }
  }

  sqlite3* db_;
  bool done_ = false;
};

std::string ToJsonText(const std::vector<std::string>& v) {
  return DumpJson(Json(v));
}

std::vector<std::string> StringsFromJsonText(const std::string& text) {
  return Json::parse(text).get<std::vector<std::string>>();
}

std::optional<int64_t> OptSeconds(bool present, TimePoint t) {
  if (!present)
    return std::nullopt;
  return ToUnixSeconds(t);
}

constexpr char kListColumns[] =
    "id, title, description, tags, property_schema, token_hash, private, "
    "rescan, honor_robots, created_at";

SiteList ReadList(const Stmt& s) {
  SiteList list;
  list.id = s.Text(0);
  list.title = s.Text(1);
  list.description = s.Text(2);
  list.tags = StringsFromJsonText(s.Text(3));
  list.property_schema = StringsFromJsonText(s.Text(4));
  list.access_token_hash = s.Text(5);
  list.is_private = s.Int(6) != 0;
  list.rescan_enabled = s.Int(7) != 0;
  list.honor_robots = s.Int(8) != 0;
  list.created_at = FromUnixSeconds(s.Int(9));
  return list;
}

constexpr char kSiteColumns[] = "id, list_id, url, final_url, properties";

StoredSite ReadSite(const Stmt& s) {
  StoredSite out;
  out.site.id = s.Text(0);
  out.list_ref = s.OptText(1);
  out.site.url = s.Text(2);
  out.site.final_url = s.OptText(3);
  out.site.properties = PropertiesFromJson(Json::parse(s.Text(4)));
  return out;
}

constexpr char kJobColumns[] =
    "id, site_id, list_id, url, host, enqueued_at, attempts, status";

ScanJob ReadJob(const Stmt& s) {
  ScanJob job;
  job.id = s.Text(0);
  job.site_ref = s.Text(1);
  job.list_ref = s.OptText(2);
  job.url = s.Text(3);
  job.host = s.Text(4);
  job.enqueued_at = FromUnixSeconds(s.Int(5));
  job.attempts = static_cast<int>(s.Int(6));
  job.state = ParseScanStatus(s.Text(7)).value_or(ScanStatus::kFailed);
  return job;
}

constexpr char kRunColumns[] =
    "id, site_id, list_id, url, status, started_at, finished_at, facts, "
    "results, module_errors, note";

ScanRun ReadRun(const Stmt& s, bool with_details) {
  ScanRun run;
  run.id = s.Text(0);
  run.site_ref = s.Text(1);
  run.list_ref = s.OptText(2);
  run.url = s.Text(3);
  run.status = ParseScanStatus(s.Text(4)).value_or(ScanStatus::kFailed);
  if (!s.IsNull(5))
    run.started_at = FromUnixSeconds(s.Int(5));
  if (!s.IsNull(6))
    run.finished_at = FromUnixSeconds(s.Int(6));
  if (with_details) {
    if (auto facts = s.OptText(7))
      run.facts = FactsFromJson(Json::parse(*facts));
    if (auto results = s.OptText(8))
      run.check_results = ResultsFromJson(Json::parse(*results));
  }
  if (auto errors = s.OptText(9))
    run.module_errors = StringsFromJsonText(*errors);
  run.note = s.Text(10);
  return run;
}

std::string Select(const char* columns, const std::string& rest) {
  return std::string("SELECT ") + columns + " " + rest;
}

void InsertSite(sqlite3* db,
                const Site& site,
                const std::optional<std::string>& list_id,
                int position) {
  Stmt(db,
       "INSERT INTO sites(id, list_id, position, url, final_url, properties) "
       "VALUES(?, ?, ?, ?, ?, ?)")
      .Bind(1, site.id)
      .Bind(2, list_id)
      .Bind(3, position)
      .Bind(4, site.url)
      .Bind(5, site.final_url)
      .Bind(6, DumpJson(PropertiesToJson(site.properties)))
      .Run();
}

}  // namespace

Storage::Storage(const std::string& path) {
  if (sqlite3_open_v2(
          path.c_str(), &db_,
          SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_NOMUTEX,
          nullptr) != SQLITE_OK) {
    std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    db_ = nullptr;
    throw StorageError("cannot open database " + path + ": " + msg);
  }
  sqlite3_busy_timeout(db_, 5000);
  Exec("PRAGMA foreign_keys = ON");
  if (path != ":memory:")
    Exec("PRAGMA journal_mode = WAL");
  Migrate();
}

Storage::~Storage() {
  sqlite3_close(db_);
}

void Storage::Exec(const char* sql) const {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    throw StorageError(msg);
  }
}

void Storage::Migrate() {
  Exec(kSchema);
}

void Storage::CreateList(SiteList& list) {
  std::lock_guard lock(mu_);
  Transaction tx(db_);
  list.id = RandomHexId();
  Stmt(db_,
       "INSERT INTO lists(id, title, description, tags, property_schema, "
       "token_hash, private, rescan, honor_robots, created_at) "
       "VALUES(?, ?, ?, ?, ?, ?, ?, ?, ?, ?)")
      .Bind(1, list.id)
      .Bind(2, list.title)
      .Bind(3, list.description)
      .Bind(4, ToJsonText(list.tags))
      .Bind(5, ToJsonText(list.property_schema))
      .Bind(6, list.access_token_hash)
      .Bind(7, list.is_private)
      .Bind(8, list.rescan_enabled)
      .Bind(9, list.honor_robots)
      .Bind(10, ToUnixSeconds(list.created_at))
      .Run();
  for (size_t i = 0; i < list.sites.size(); ++i) {
    list.sites[i].id = RandomHexId();
    InsertSite(db_, list.sites[i], list.id, static_cast<int>(i));
  }
  tx.Commit();
}

std::optional<SiteList> Storage::GetList(const std::string& id) const {
  std::lock_guard lock(mu_);
  Stmt s(db_, Select(kListColumns, "FROM lists WHERE id = ?").c_str());
  s.Bind(1, id);
  if (!s.Step())
    return std::nullopt;
  SiteList list = ReadList(s);
  Stmt sites(db_, Select(kSiteColumns,
                         "FROM sites WHERE list_id = ? ORDER BY position")
                      .c_str());
  sites.Bind(1, id);
  while (sites.Step())
    list.sites.push_back(ReadSite(sites).site);
  return list;
}

ListPage Storage::FindLists(const ListQuery& query) const {
  std::lock_guard lock(mu_);
  const std::string where =
      "FROM lists WHERE private = 0 "
      "AND (?1 = '' OR instr(lower(title), lower(?1)) > 0 "
      "     OR instr(lower(description), lower(?1)) > 0) "
      "AND (?2 = '' OR EXISTS "
      "     (SELECT 1 FROM json_each(lists.tags) WHERE value = ?2)) ";
  ListPage page;
  Stmt count(db_, ("SELECT COUNT(*) " + where).c_str());
  count.Bind(1, query.q).Bind(2, query.tag);
  if (count.Step())
    page.total = static_cast<int>(count.Int(0));
  Stmt s(db_, Select(kListColumns, where + "ORDER BY created_at DESC, id "
                                           "LIMIT ?3 OFFSET ?4")
                  .c_str());
  s.Bind(1, query.q)
      .Bind(2, query.tag)
      .Bind(3, query.limit)
      .Bind(4, query.offset);
  while (s.Step())
    page.lists.push_back(ReadList(s));
  return page;
}

void Storage::UpdateList(SiteList& list) {
  std::lock_guard lock(mu_);
  Transaction tx(db_);
  Stmt update(db_,
              "UPDATE lists SET title = ?, description = ?, tags = ?, "
              "property_schema = ?, private = ?, rescan = ?, honor_robots = ? "
              "WHERE id = ?");
  update.Bind(1, list.title)
      .Bind(2, list.description)
      .Bind(3, ToJsonText(list.tags))
      .Bind(4, ToJsonText(list.property_schema))
      .Bind(5, list.is_private)
      .Bind(6, list.rescan_enabled)
      .Bind(7, list.honor_robots)
      .Bind(8, list.id)
      .Run();
  if (sqlite3_changes(db_) == 0)
    throw StorageError("unknown list " + list.id);

  std::map<std::string, std::string> existing;  // url -> id
  {
    Stmt s(db_, "SELECT url, id FROM sites WHERE list_id = ?");
    s.Bind(1, list.id);
    while (s.Step())
      existing[s.Text(0)] = s.Text(1);
  }
  std::set<std::string> kept;
  for (size_t i = 0; i < list.sites.size(); ++i) {
    Site& site = list.sites[i];
    auto it = existing.find(site.url);
    if (it == existing.end()) {
      site.id = RandomHexId();
      InsertSite(db_, site, list.id, static_cast<int>(i));
      continue;
    }
    site.id = it->second;
    kept.insert(site.id);
    Stmt(db_, "UPDATE sites SET position = ?, properties = ? WHERE id = ?")
        .Bind(1, static_cast<int>(i))
        .Bind(2, DumpJson(PropertiesToJson(site.properties)))
        .Bind(3, site.id)
        .Run();
  }
  for (const auto& [url, id] : existing) {
    if (!kept.count(id))
      Stmt(db_, "DELETE FROM sites WHERE id = ?").Bind(1, id).Run();
  }
  tx.Commit();
}

bool Storage::DeleteList(const std::string& id) {
  std::lock_guard lock(mu_);
  Transaction tx(db_);
  Stmt(db_, "DELETE FROM lists WHERE id = ?").Bind(1, id).Run();
  bool deleted = sqlite3_changes(db_) > 0;
  tx.Commit();
  return deleted;
}

std::optional<StoredSite> Storage::GetSite(const std::string& id) const {
  std::lock_guard lock(mu_);
  Stmt s(db_, Select(kSiteColumns, "FROM sites WHERE id = ?").c_str());
  s.Bind(1, id);
  if (!s.Step())
    return std::nullopt;
  return ReadSite(s);
}

Site Storage::UnlistedSite(const std::string& url) {
  std::lock_guard lock(mu_);
  Transaction tx(db_);
  Stmt s(db_,
         Select(kSiteColumns, "FROM sites WHERE list_id IS NULL AND url = ?")
             .c_str());
  s.Bind(1, url);
  if (s.Step())
    return ReadSite(s).site;
  Site site;
  site.id = RandomHexId();
  site.url = url;
  InsertSite(db_, site, std::nullopt, 0);
  tx.Commit();
  return site;
}

std::string Storage::InsertRun(ScanRun& run,
                               TimePoint enqueued_at,
                               int attempts) {
  std::lock_guard lock(mu_);
  if (run.id.empty())
    run.id = RandomHexId();
  bool started = run.status != ScanStatus::kQueued;
  bool finished = run.status == ScanStatus::kDone ||
                  run.status == ScanStatus::kFailed ||
                  run.status == ScanStatus::kBlacklisted;
  Stmt(db_,
       "INSERT INTO runs(id, site_id, list_id, url, host, status, attempts, "
       "enqueued_at, started_at, finished_at, facts, results, module_errors, "
       "note) VALUES(?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)")
      .Bind(1, run.id)
      .Bind(2, run.site_ref)
      .Bind(3, run.list_ref)
      .Bind(4, run.url)
      .Bind(5, HostOf(run.url))
      .Bind(6, std::string(ScanStatusName(run.status)))
      .Bind(7, attempts)
      .Bind(8, ToUnixSeconds(enqueued_at))
      .Bind(9, OptSeconds(started, run.started_at))
      .Bind(10, OptSeconds(finished, run.finished_at))
      .Bind(11, DumpJson(FactsToJson(run.facts)))
      .Bind(12, DumpJson(ResultsToJson(run.check_results)))
      .Bind(13, ToJsonText(run.module_errors))
      .Bind(14, run.note)
      .Run();
  return run.id;
}

std::optional<ScanJob> Storage::ActiveJobForSite(
    const std::string& site_id) const {
  std::lock_guard lock(mu_);
  Stmt s(db_, Select(kJobColumns,
                     "FROM runs WHERE site_id = ? AND status IN "
                     "('queued', 'running') ORDER BY seq LIMIT 1")
                  .c_str());
  s.Bind(1, site_id);
  if (!s.Step())
    return std::nullopt;
  return ReadJob(s);
}

std::optional<ScanJob> Storage::GetJob(const std::string& id) const {
  std::lock_guard lock(mu_);
  Stmt s(db_, Select(kJobColumns, "FROM runs WHERE id = ?").c_str());
  s.Bind(1, id);
  if (!s.Step())
    return std::nullopt;
  return ReadJob(s);
}

std::optional<ScanRun> Storage::GetRun(const std::string& id) const {
  std::lock_guard lock(mu_);
  Stmt s(db_, Select(kRunColumns, "FROM runs WHERE id = ?").c_str());
  s.Bind(1, id);
  if (!s.Step())
    return std::nullopt;
  return ReadRun(s, true);
}

std::optional<ScanJob> Storage::ClaimNext(
    TimePoint now,
    const std::function<bool(const ScanJob&)>& admit) {
  std::lock_guard lock(mu_);
  Transaction tx(db_);
  std::optional<ScanJob> chosen;
  {
    Stmt s(db_,
           Select(kJobColumns, "FROM runs WHERE status = 'queued' ORDER BY seq")
               .c_str());
    while (s.Step()) {
      ScanJob job = ReadJob(s);
      if (admit(job)) {
        chosen = std::move(job);
        break;
      }
    }
  }
  if (!chosen)
    return std::nullopt;
  Stmt(db_,
       "UPDATE runs SET status = 'running', attempts = attempts + 1, "
       "started_at = ? WHERE id = ?")
      .Bind(1, ToUnixSeconds(now))
      .Bind(2, chosen->id)
      .Run();
  tx.Commit();
  chosen->state = ScanStatus::kRunning;
  ++chosen->attempts;
  return chosen;
}

void Storage::CompleteRun(const ScanRun& run) {
  std::lock_guard lock(mu_);
  Transaction tx(db_);
  Stmt(db_,
       "UPDATE runs SET status = ?, finished_at = ?, facts = ?, results = ?, "
       "module_errors = ?, note = ? WHERE id = ? AND status = 'running'")
      .Bind(1, std::string(ScanStatusName(run.status)))
      .Bind(2, ToUnixSeconds(run.finished_at))
      .Bind(3, DumpJson(FactsToJson(run.facts)))
      .Bind(4, DumpJson(ResultsToJson(run.check_results)))
      .Bind(5, ToJsonText(run.module_errors))
      .Bind(6, run.note)
      .Bind(7, run.id)
      .Run();
  if (sqlite3_changes(db_) == 0)
    throw StorageError("run " + run.id + " is not running");
  if (run.facts.content) {
    Stmt(db_, "UPDATE sites SET final_url = ? WHERE id = ?")
        .Bind(1, run.facts.content->final_url)
        .Bind(2, run.site_ref)
        .Run();
  }
  tx.Commit();
}

void Storage::RequeueJob(const std::string& id, const std::string& note) {
  std::lock_guard lock(mu_);
  Stmt(db_,
       "UPDATE runs SET status = 'queued', note = ? "
       "WHERE id = ? AND status = 'running'")
      .Bind(1, note)
      .Bind(2, id)
      .Run();
}

int Storage::RequeueStale(TimePoint cutoff, int max_attempts) {
  std::lock_guard lock(mu_);
  Transaction tx(db_);
  Stmt(db_,
       "UPDATE runs SET status = 'failed', finished_at = ?1, "
       "note = 'worker lost; attempt limit reached' "
       "WHERE status = 'running' AND started_at < ?1 AND attempts >= ?2")
      .Bind(1, ToUnixSeconds(cutoff))
      .Bind(2, max_attempts)
      .Run();
  int changed = sqlite3_changes(db_);
  Stmt(db_,
       "UPDATE runs SET status = 'queued', note = 'requeued after worker loss' "
       "WHERE status = 'running' AND started_at < ?")
      .Bind(1, ToUnixSeconds(cutoff))
      .Run();
  changed += sqlite3_changes(db_);
  tx.Commit();
  return changed;
}

void Storage::MarkBlacklisted(const std::vector<std::string>& ids,
                              const std::string& note,
                              TimePoint now) {
  std::lock_guard lock(mu_);
  Transaction tx(db_);
  for (const std::string& id : ids) {
    Stmt(db_,
         "UPDATE runs SET status = 'blacklisted', started_at = ?1, "
         "finished_at = ?1, note = ?2 WHERE id = ?3 AND status = 'queued'")
        .Bind(1, ToUnixSeconds(now))
        .Bind(2, note)
        .Bind(3, id)
        .Run();
  }
  tx.Commit();
}

bool Storage::HasActiveJobForHost(const std::string& host) const {
  std::lock_guard lock(mu_);
  Stmt s(db_,
         "SELECT 1 FROM runs WHERE host = ? AND status IN "
         "('queued', 'running') LIMIT 1");
  s.Bind(1, host);
  return s.Step();
}

std::optional<ScanRun> Storage::LatestDoneRun(
    const std::string& site_id) const {
  std::lock_guard lock(mu_);
  Stmt s(db_, Select(kRunColumns,
                     "FROM runs WHERE site_id = ? AND status = 'done' "
                     "ORDER BY seq DESC LIMIT 1")
                  .c_str());
  s.Bind(1, site_id);
  if (!s.Step())
    return std::nullopt;
  return ReadRun(s, true);
}

std::vector<ScanRun> Storage::RunHistory(const std::string& site_id) const {
  std::lock_guard lock(mu_);
  Stmt s(
      db_,
      Select(kRunColumns, "FROM runs WHERE site_id = ? ORDER BY seq").c_str());
  s.Bind(1, site_id);
  std::vector<ScanRun> out;
  while (s.Step())
    out.push_back(ReadRun(s, false));
  return out;
}

std::vector<StoredSite> Storage::SitesDueForRescan(TimePoint cutoff) const {
  std::lock_guard lock(mu_);
  Stmt s(db_,
         "SELECT s.id, s.list_id, s.url, s.final_url, s.properties "
         "FROM sites s JOIN lists l ON l.id = s.list_id "
         "WHERE l.rescan = 1 "
         "AND NOT EXISTS (SELECT 1 FROM runs r WHERE r.site_id = s.id "
         "                AND r.status IN ('queued', 'running')) "
         "AND COALESCE((SELECT MAX(COALESCE(r.finished_at, r.enqueued_at)) "
         "              FROM runs r WHERE r.site_id = s.id), ?1 - 1) < ?1 "
         "ORDER BY l.created_at, l.id, s.position");
  s.Bind(1, ToUnixSeconds(cutoff));
  std::vector<StoredSite> out;
  while (s.Step())
    out.push_back(ReadSite(s));
  return out;
}

std::map<std::string, TimePoint> Storage::LastStartPerHost() const {
  std::lock_guard lock(mu_);
  Stmt s(db_,
         "SELECT host, MAX(started_at) FROM runs "
         "WHERE started_at IS NOT NULL AND status != 'blacklisted' "
         "GROUP BY host");
  std::map<std::string, TimePoint> out;
  while (s.Step())
    out[s.Text(0)] = FromUnixSeconds(s.Int(1));
  return out;
}

int Storage::CountJobs(ScanStatus state) const {
  std::lock_guard lock(mu_);
  Stmt s(db_, "SELECT COUNT(*) FROM runs WHERE status = ?");
  s.Bind(1, std::string(ScanStatusName(state)));
  return s.Step() ? static_cast<int>(s.Int(0)) : 0;
}

}  // namespace sitebench
