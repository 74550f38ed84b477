#include "sitebench/api_service.h"

#include <httplib.h>

#include <algorithm>
#include <charconv>

#include "sitebench/csv.h"
#include "sitebench/openapi.h"
#include "sitebench/ranking.h"
#include "sitebench/token.h"
#include "sitebench/url.h"

namespace sitebench {

namespace {

constexpr char kOptOutAnnotation[] =
    "The site owner opted out of scanning. The results shown were collected "
    "before the opt-out.";

// Handler failure carrying an HTTP status.
class HttpError : public std::runtime_error {
 public:
  HttpError(int status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

void Reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(DumpJson(body, 2), "application/json");
}

std::optional<std::string> BearerToken(const httplib::Request& req) {
  std::string auth = req.get_header_value("Authorization");
  constexpr std::string_view kPrefix = "Bearer ";
  if (auth.size() <= kPrefix.size() ||
      ToLowerAscii(auth.substr(0, kPrefix.size())) != "bearer ")
    return std::nullopt;
  return std::string(TrimWhitespace(auth.substr(kPrefix.size())));
}

bool HasValidToken(const httplib::Request& req, const SiteList& list) {
  auto token = BearerToken(req);
  return token && VerifyToken(*token, list.access_token_hash);
}

void RequireToken(const httplib::Request& req, const SiteList& list) {
  if (!HasValidToken(req, list))
    throw HttpError(403, "missing or invalid access token");
}

// Private lists are readable with their token only.
void RequireReadable(const httplib::Request& req, const SiteList& list) {
  if (list.is_private && !HasValidToken(req, list))
    throw HttpError(403, "list is private");
}

int QueryInt(const httplib::Request& req,
             const char* name,
             int fallback,
             int min,
             int max) {
  if (!req.has_param(name))
    return fallback;
  std::string v = req.get_param_value(name);
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || out < min || out > max)
    throw HttpError(400, std::string("parameter '") + name +
                             "' must be an integer in [" + std::to_string(min) +
                             ", " + std::to_string(max) + "]");
  return out;
}

bool ParseBool(std::string_view v) {
  std::string s = ToLowerAscii(TrimWhitespace(v));
  if (s == "true" || s == "1" || s == "yes")
    return true;
  if (s == "false" || s == "0" || s == "no" || s.empty())
    return false;
  throw HttpError(400, "expected a boolean, got '" + std::string(v) + "'");
}

RankingScheme SchemeFrom(const httplib::Request& req) {
  if (!req.has_param("order"))
    return RankingScheme{};
  try {
    return ParseGroupOrder(req.get_param_value("order"));
  } catch (const InvalidGroupOrder& e) {
    throw HttpError(400, e.what());
  }
}

Json ColorOrNull(const SiteRating& rating, CheckGroup g) {
  auto it = rating.group_ratings.find(g);
  return it == rating.group_ratings.end() ? Json(nullptr)
                                          : Json(ColorName(it->second));
}

Json GroupColors(const SiteRating& rating) {
  Json out = Json::object();
  for (CheckGroup g : kAllGroups)
    out[std::string(GroupName(g))] = ColorOrNull(rating, g);
  return out;
}

Json OverallOrNull(const SiteRating& rating) {
  return rating.group_ratings.empty() ? Json(nullptr)
                                      : Json(ColorName(rating.overall));
}

Json SiteToJson(const Site& site) {
  return {{"id", site.id},
          {"url", site.url},
          {"final_url", site.final_url ? Json(*site.final_url) : Json(nullptr)},
          {"properties", PropertiesToJson(site.properties)}};
}

Json HistoryEntry(const ScanRun& run) {
  bool started = run.status != ScanStatus::kQueued;
  bool finished =
      run.status != ScanStatus::kQueued && run.status != ScanStatus::kRunning;
  return {{"id", run.id},
          {"status", ScanStatusName(run.status)},
          {"started_at",
           started ? Json(FormatTimestamp(run.started_at)) : Json(nullptr)},
          {"finished_at",
           finished ? Json(FormatTimestamp(run.finished_at)) : Json(nullptr)},
          {"note", run.note}};
}

// Sites of a create/update body: ["url", ...] or [{url, properties}, ...].
std::vector<Site> SitesFromJson(const Json& sites) {
  if (!sites.is_array())
    throw HttpError(400, "'sites' must be an array");
  std::vector<Site> out;
  for (const Json& entry : sites) {
    Site site;
    const Json* url = nullptr;
    if (entry.is_string()) {
      url = &entry;
    } else if (entry.is_object() && entry.contains("url")) {
      url = &entry.at("url");
      if (entry.contains("properties"))
        site.properties = PropertiesFromJson(entry.at("properties"));
    }
    if (!url || !url->is_string())
      throw HttpError(400, "each site needs a string 'url'");
    site.url = NormalizeUrl(url->get<std::string>());
    out.push_back(std::move(site));
  }
  return out;
}

std::vector<std::string> SchemaFromSites(const std::vector<Site>& sites) {
  std::vector<std::string> schema;
  for (const Site& s : sites) {
    for (const auto& [key, value] : s.properties) {
      if (std::find(schema.begin(), schema.end(), key) == schema.end())
        schema.push_back(key);
    }
  }
  return schema;
}

std::vector<std::string> Strings(const Json& j, const char* name) {
  if (!j.is_array())
    throw HttpError(400, std::string("'") + name + "' must be an array");
  std::vector<std::string> out;
  for (const Json& v : j) {
    if (!v.is_string())
      throw HttpError(400, std::string("'") + name + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<std::string> SplitTags(std::string_view text) {
  std::vector<std::string> out;
  while (!text.empty()) {
    size_t comma = std::min(text.find(','), text.size());
    std::string_view tag = TrimWhitespace(text.substr(0, comma));
    if (!tag.empty())
      out.emplace_back(tag);
    text.remove_prefix(std::min(comma + 1, text.size()));
  }
  return out;
}

// Applies the fields present in |body| to |list|. |creating| demands sites.
void ApplyListFields(const Json& body, SiteList& list, bool creating) {
  if (!body.is_object())
    throw HttpError(400, "body must be a JSON object");
  auto text = [&](const char* key, std::string& field) {
    if (!body.contains(key))
      return;
    if (!body.at(key).is_string())
      throw HttpError(400, std::string("'") + key + "' must be a string");
    field = body.at(key).get<std::string>();
  };
  auto flag = [&](const char* key, bool& field) {
    if (!body.contains(key))
      return;
    if (!body.at(key).is_boolean())
      throw HttpError(400, std::string("'") + key + "' must be a boolean");
    field = body.at(key).get<bool>();
  };
  text("title", list.title);
  text("description", list.description);
  if (body.contains("tags"))
    list.tags = Strings(body.at("tags"), "tags");
  flag("private", list.is_private);
  flag("rescan", list.rescan_enabled);
  flag("honor_robots", list.honor_robots);
  if (body.contains("sites")) {
    list.sites = SitesFromJson(body.at("sites"));
    list.property_schema =
        body.contains("property_schema")
            ? Strings(body.at("property_schema"), "property_schema")
            : SchemaFromSites(list.sites);
  } else if (creating) {
    throw HttpError(400, "'sites' is required");
  } else if (body.contains("property_schema")) {
    list.property_schema =
        Strings(body.at("property_schema"), "property_schema");
  }
  if (list.sites.empty())
    throw HttpError(422, "a site list needs at least one site");
}

void ValidateOrThrow(SiteList& list) {
  ConformProperties(list);
  try {
    ValidateSiteList(list);
  } catch (const InvalidSiteList& e) {
    throw HttpError(422, e.what());
  }
}

using Handler =
    std::function<void(const httplib::Request&, httplib::Response&)>;

// Maps exceptions to JSON error responses.
httplib::Server::Handler Guard(Handler h) {
  return [h = std::move(h)](const httplib::Request& req,
                            httplib::Response& res) {
    try {
      h(req, res);
    } catch (const HttpError& e) {
      Reply(res, e.status(), {{"error", e.what()}});
    } catch (const MalformedUrl& e) {
      Reply(res, 400, {{"error", e.what()}});
    } catch (const CsvError& e) {
      Reply(res, 400, {{"error", e.what()}});
    } catch (const JsonError& e) {
      Reply(res, 400, {{"error", e.what()}});
    } catch (const nlohmann::json::exception& e) {
      Reply(res, 400, {{"error", std::string("invalid JSON: ") + e.what()}});
    } catch (const StorageError& e) {
      Reply(res, 503, {{"error", std::string("storage: ") + e.what()}});
    } catch (const std::exception& e) {
      Reply(res, 500, {{"error", e.what()}});
    }
  };
}

}  // namespace

Json ListToJson(const SiteList& list, bool with_sites) {
  Json j = {{"id", list.id},
            {"title", list.title},
            {"description", list.description},
            {"tags", list.tags},
            {"property_schema", list.property_schema},
            {"private", list.is_private},
            {"rescan", list.rescan_enabled},
            {"honor_robots", list.honor_robots},
            {"created_at", FormatTimestamp(list.created_at)}};
  if (with_sites) {
    Json sites = Json::array();
    for (const Site& s : list.sites)
      sites.push_back(SiteToJson(s));
    j["sites"] = sites;
    j["site_count"] = list.sites.size();
  }
  return j;
}

Json SiteResultsJson(const Site& site,
                     const std::optional<std::string>& list_ref,
                     const std::optional<ScanRun>& latest,
                     const std::vector<ScanRun>& history,
                     const CheckCatalog& catalog,
                     const std::optional<std::string>& annotation) {
  Json j;
  j["site"] = SiteToJson(site);
  j["list_id"] = list_ref ? Json(*list_ref) : Json(nullptr);
  if (latest) {
    SiteRating rating = RateSite(site.id, site.url, latest->check_results);
    Json checks = Json::array();
    for (const CheckResult& r : latest->check_results) {
      const CatalogEntry* entry = catalog.Find(r.check_id);
      checks.push_back(
          {{"check_id", r.check_id},
           {"group", GroupName(r.group)},
           {"outcome", OutcomeName(r.outcome)},
           {"critical", r.critical},
           {"evidence", r.evidence},
           {"title", entry ? Json(entry->title) : Json(nullptr)},
           {"criterion", entry ? Json(entry->criterion) : Json(nullptr)}});
    }
    j["run"] = {{"id", latest->id},
                {"status", ScanStatusName(latest->status)},
                {"started_at", FormatTimestamp(latest->started_at)},
                {"finished_at", FormatTimestamp(latest->finished_at)},
                {"module_errors", latest->module_errors},
                {"note", latest->note},
                {"group_ratings", GroupColors(rating)},
                {"overall", OverallOrNull(rating)},
                {"checks", checks}};
  } else {
    j["run"] = nullptr;
  }
  Json hist = Json::array();
  for (const ScanRun& r : history)
    hist.push_back(HistoryEntry(r));
  j["history"] = hist;
  j["annotation"] = annotation ? Json(*annotation) : Json(nullptr);
  return j;
}

ApiService::ApiService(Storage& storage,
                       Orchestrator& orchestrator,
                       Blacklist& blacklist,
                       const CheckCatalog& catalog,
                       const ScanClock& clock)
    : storage_(storage),
      orchestrator_(orchestrator),
      blacklist_(blacklist),
      catalog_(catalog),
      clock_(clock) {}

std::vector<ApiService::RankedSite> ApiService::Rank(
    const SiteList& list,
    const RankingScheme& scheme) const {
  std::vector<RankedSite> rows;
  std::vector<SiteRating> ratings;
  for (const Site& site : list.sites) {
    RankedSite row{site, storage_.LatestDoneRun(site.id), {}};
    std::vector<CheckResult> results;
    if (row.run)
      results = row.run->check_results;
    row.rating = RateSite(site.id, site.url, results);
    ratings.push_back(row.rating);
    rows.push_back(std::move(row));
  }
  std::vector<std::string> order = RankSites(ratings, scheme);
  std::vector<RankedSite> sorted;
  for (const std::string& id : order) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const RankedSite& r) {
      return r.site.id == id;
    });
    sorted.push_back(std::move(*it));
    rows.erase(it);
  }
  return sorted;
}

Json ApiService::ExportJson(const SiteList& list,
                            const RankingScheme& scheme) const {
  std::vector<RankedSite> ranked = Rank(list, scheme);
  Json sites = Json::array();
  for (const Site& site : list.sites) {
    auto row =
        std::find_if(ranked.begin(), ranked.end(),
                     [&](const RankedSite& r) { return r.site.id == site.id; });
    Json s = SiteToJson(site);
    s["latest_run"] = row->run ? RunToJson(*row->run) : Json(nullptr);
    sites.push_back(s);
  }
  Json ranking = Json::array();
  int rank = 0;
  for (const RankedSite& r : ranked) {
    ranking.push_back({{"rank", ++rank},
                       {"site_id", r.site.id},
                       {"url", r.site.url},
                       {"group_ratings", GroupColors(r.rating)},
                       {"overall", OverallOrNull(r.rating)}});
  }
  return {{"format", kExportFormat},
          {"version", kExportVersion},
          {"list", ListToJson(list, false)},
          {"order", FormatGroupOrder(scheme)},
          {"sites", sites},
          {"ranking", ranking}};
}

std::string ApiService::ExportCsv(const SiteList& list,
                                  const RankingScheme& scheme) const {
  std::vector<CsvRow> rows;
  CsvRow header(std::begin(kCsvSiteColumns), std::end(kCsvSiteColumns));
  for (const CatalogEntry& e : catalog_.entries())
    header.push_back(e.id);
  rows.push_back(header);
  for (const RankedSite& r : Rank(list, scheme)) {
    CsvRow row = {r.site.url, r.site.final_url.value_or(""),
                  r.run ? FormatTimestamp(r.run->finished_at) : "",
                  r.rating.group_ratings.empty()
                      ? ""
                      : std::string(ColorName(r.rating.overall))};
    for (CheckGroup g : kAllGroups) {
      auto it = r.rating.group_ratings.find(g);
      row.push_back(it == r.rating.group_ratings.end()
                        ? ""
                        : std::string(ColorName(it->second)));
    }
    for (const CatalogEntry& e : catalog_.entries()) {
      std::string cell;
      if (r.run) {
        for (const CheckResult& c : r.run->check_results) {
          if (c.check_id == e.id)
            cell = OutcomeName(c.outcome);
        }
      }
      row.push_back(cell);
    }
    rows.push_back(std::move(row));
  }
  return WriteCsv(rows);
}

std::pair<SiteList, std::string> ApiService::Import(const Json& doc) {
  if (!doc.is_object() || doc.value("format", "") != kExportFormat)
    throw HttpError(400, "not a list export document");
  if (doc.value("version", 0) != kExportVersion)
    throw HttpError(400, "unsupported export version");
  const Json& meta = doc.at("list");
  SiteList list;
  list.title = meta.at("title").get<std::string>();
  list.description = meta.at("description").get<std::string>();
  list.tags = meta.at("tags").get<std::vector<std::string>>();
  list.property_schema =
      meta.at("property_schema").get<std::vector<std::string>>();
  list.is_private = meta.at("private").get<bool>();
  list.rescan_enabled = meta.at("rescan").get<bool>();
  list.honor_robots = meta.at("honor_robots").get<bool>();
  list.created_at = clock_.Now();
  std::vector<std::optional<ScanRun>> runs;
  for (const Json& s : doc.at("sites")) {
    Site site;
    site.url = NormalizeUrl(s.at("url").get<std::string>());
    if (s.contains("final_url") && s.at("final_url").is_string())
      site.final_url = s.at("final_url").get<std::string>();
    site.properties = PropertiesFromJson(s.at("properties"));
    list.sites.push_back(std::move(site));
    const Json& run = s.at("latest_run");
    runs.push_back(run.is_null() ? std::nullopt
                                 : std::optional(RunFromJson(run)));
  }
  std::string token = GenerateToken();
  list.access_token_hash = HashToken(token);
  ValidateOrThrow(list);
  storage_.CreateList(list);
  for (size_t i = 0; i < list.sites.size(); ++i) {
    if (!runs[i])
      continue;
    ScanRun run = std::move(*runs[i]);
    run.id.clear();
    run.site_ref = list.sites[i].id;
    run.list_ref = list.id;
    run.url = list.sites[i].url;
    run.status = ScanStatus::kDone;
    storage_.InsertRun(run, run.started_at, 1);
  }
  return {list, token};
}

void ApiService::Mount(httplib::Server& server) {
  server.Get("/api/v1/openapi.json",
             Guard([](const httplib::Request&, httplib::Response& res) {
               Reply(res, 200, OpenApiSpec());
             }));

  server.Get("/api/v1/catalog",
             Guard([this](const httplib::Request&, httplib::Response& res) {
               Json checks = Json::array();
               for (const CatalogEntry& e : catalog_.entries())
                 checks.push_back({{"check_id", e.id},
                                   {"group", GroupName(e.group)},
                                   {"critical", e.critical},
                                   {"title", e.title},
                                   {"criterion", e.criterion}});
               Reply(res, 200, {{"checks", checks}});
             }));

  server.Get("/api/v1/lists",
             Guard([this](const httplib::Request& req, httplib::Response& res) {
               ListQuery q;
               q.q = req.get_param_value("q");
               q.tag = req.get_param_value("tag");
               q.limit = QueryInt(req, "limit", 50, 1, 500);
               q.offset = QueryInt(req, "offset", 0, 0, 1 << 30);
               ListPage page = storage_.FindLists(q);
               Json lists = Json::array();
               for (const SiteList& l : page.lists)
                 lists.push_back(ListToJson(l, false));
               Reply(res, 200,
                     {{"total", page.total},
                      {"limit", q.limit},
                      {"offset", q.offset},
                      {"lists", lists}});
             }));

  server.Post(
      "/api/v1/lists",
      Guard([this](const httplib::Request& req, httplib::Response& res) {
        SiteList list;
        list.created_at = clock_.Now();
        std::string type = req.get_header_value("Content-Type");
        if (type.rfind("text/csv", 0) == 0) {
          SiteCsv csv = ParseSiteCsv(req.body);
          list.title = req.get_param_value("title");
          list.description = req.get_param_value("description");
          list.tags = SplitTags(req.get_param_value("tags"));
          if (req.has_param("private"))
            list.is_private = ParseBool(req.get_param_value("private"));
          if (req.has_param("rescan"))
            list.rescan_enabled = ParseBool(req.get_param_value("rescan"));
          if (req.has_param("honor_robots"))
            list.honor_robots = ParseBool(req.get_param_value("honor_robots"));
          list.property_schema = std::move(csv.property_schema);
          list.sites = std::move(csv.sites);
          if (list.sites.empty())
            throw HttpError(422, "a site list needs at least one site");
        } else {
          ApplyListFields(Json::parse(req.body), list, true);
        }
        std::string token = GenerateToken();
        list.access_token_hash = HashToken(token);
        ValidateOrThrow(list);
        storage_.CreateList(list);
        for (const Site& s : list.sites)
          orchestrator_.Enqueue(s, list.id);
        Reply(res, 201,
              {{"list_id", list.id},
               {"token", token},
               {"list", ListToJson(list, true)}});
      }));

  auto load_list = [this](const std::string& id) {
    auto list = storage_.GetList(id);
    if (!list)
      throw HttpError(404, "unknown list " + id);
    return std::move(*list);
  };

  server.Get(
      R"(/api/v1/lists/([^/]+))",
      Guard([load_list](const httplib::Request& req, httplib::Response& res) {
        SiteList list = load_list(req.matches[1]);
        RequireReadable(req, list);
        Reply(res, 200, ListToJson(list, true));
      }));

  server.Put(R"(/api/v1/lists/([^/]+))",
             Guard([this, load_list](const httplib::Request& req,
                                     httplib::Response& res) {
               SiteList list = load_list(req.matches[1]);
               RequireToken(req, list);
               ApplyListFields(Json::parse(req.body), list, false);
               ValidateOrThrow(list);
               storage_.UpdateList(list);
               for (const Site& s : list.sites) {
                 if (!storage_.LatestDoneRun(s.id))
                   orchestrator_.Enqueue(s, list.id);
               }
               Reply(res, 200, ListToJson(*storage_.GetList(list.id), true));
             }));

  server.Delete(R"(/api/v1/lists/([^/]+))",
                Guard([this, load_list](const httplib::Request& req,
                                        httplib::Response& res) {
                  SiteList list = load_list(req.matches[1]);
                  RequireToken(req, list);
                  storage_.DeleteList(list.id);
                  Reply(res, 200, {{"deleted", list.id}});
                }));

  server.Post(R"(/api/v1/lists/([^/]+)/scan)",
              Guard([this, load_list](const httplib::Request& req,
                                      httplib::Response& res) {
                SiteList list = load_list(req.matches[1]);
                RequireToken(req, list);
                Json jobs = Json::array();
                for (const Site& s : list.sites) {
                  EnqueueResult r = orchestrator_.Enqueue(s, list.id);
                  jobs.push_back({{"run_id", r.job.id},
                                  {"site_id", s.id},
                                  {"status", ScanStatusName(r.job.state)},
                                  {"duplicate", r.duplicate}});
                }
                Reply(res, 202, {{"jobs", jobs}});
              }));

  server.Get(
      R"(/api/v1/lists/([^/]+)/ranking)",
      Guard([this, load_list](const httplib::Request& req,
                              httplib::Response& res) {
        RankingScheme scheme = SchemeFrom(req);
        SiteList list = load_list(req.matches[1]);
        RequireReadable(req, list);
        std::vector<RankedSite> ranked = Rank(list, scheme);
        Json rows = Json::array();
        std::vector<SiteRating> ratings;
        int rank = 0;
        for (const RankedSite& r : ranked) {
          if (!r.rating.group_ratings.empty())
            ratings.push_back(r.rating);
          rows.push_back(
              {{"rank", ++rank},
               {"site", SiteToJson(r.site)},
               {"group_ratings", GroupColors(r.rating)},
               {"overall", OverallOrNull(r.rating)},
               {"scanned_at", r.run ? Json(FormatTimestamp(r.run->finished_at))
                                    : Json(nullptr)}});
        }
        Json stats = Json::object();
        for (const auto& [g, counts] : AggregateListStats(ratings)) {
          Json c = Json::object();
          for (Color color :
               {Color::kGreen, Color::kYellow, Color::kNeutral, Color::kRed})
            c[std::string(ColorName(color))] = counts[static_cast<int>(color)];
          stats[std::string(GroupName(g))] = c;
        }
        Reply(res, 200,
              {{"list_id", list.id},
               {"order", FormatGroupOrder(scheme)},
               {"rows", rows},
               {"stats", stats}});
      }));

  server.Get(
      R"(/api/v1/sites/([^/]+)/results)",
      Guard([this, load_list](const httplib::Request& req,
                              httplib::Response& res) {
        auto site = storage_.GetSite(req.matches[1]);
        if (!site)
          throw HttpError(404, "unknown site");
        if (site->list_ref)
          RequireReadable(req, load_list(*site->list_ref));
        std::vector<ScanRun> history = storage_.RunHistory(site->site.id);
        blacklist_.Refresh();
        bool opted_out = blacklist_.Match(site->site.url).has_value() ||
                         (!history.empty() &&
                          history.back().status == ScanStatus::kBlacklisted);
        std::optional<std::string> annotation;
        if (opted_out)
          annotation = kOptOutAnnotation;
        Reply(res, 200,
              SiteResultsJson(site->site, site->list_ref,
                              storage_.LatestDoneRun(site->site.id), history,
                              catalog_, annotation));
      }));

  server.Get(R"(/api/v1/runs/([^/]+))",
             Guard([this, load_list](const httplib::Request& req,
                                     httplib::Response& res) {
               auto run = storage_.GetRun(req.matches[1]);
               if (!run)
                 throw HttpError(404, "unknown run");
               if (run->list_ref)
                 RequireReadable(req, load_list(*run->list_ref));
               Json j = HistoryEntry(*run);
               j["site_id"] = run->site_ref;
               j["url"] = run->url;
               j["list_id"] =
                   run->list_ref ? Json(*run->list_ref) : Json(nullptr);
               j["check_results"] = ResultsToJson(run->check_results);
               j["module_errors"] = run->module_errors;
               Reply(res, 200, j);
             }));

  server.Post(
      "/api/v1/scan",
      Guard([this](const httplib::Request& req, httplib::Response& res) {
        Json body = Json::parse(req.body);
        if (!body.is_object() || !body.contains("url") ||
            !body.at("url").is_string())
          throw HttpError(400, "body must be {\"url\": string}");
        std::string url = NormalizeUrl(body.at("url").get<std::string>());
        std::string host = HostOf(url);
        if (orchestrator_.HostDeferred(host)) {
          auto wait = std::chrono::duration_cast<std::chrono::seconds>(
              orchestrator_.limiter().NextAllowed(host) - clock_.Now());
          res.set_header("Retry-After",
                         std::to_string(std::max<int64_t>(1, wait.count())));
          throw HttpError(429, "host " + host +
                                   " was scanned recently or is "
                                   "being scanned");
        }
        Site site = storage_.UnlistedSite(url);
        EnqueueResult r = orchestrator_.Enqueue(site, std::nullopt);
        Reply(res, 202,
              {{"run_id", r.job.id},
               {"site_id", site.id},
               {"status", ScanStatusName(r.job.state)}});
      }));

  server.Get(R"(/api/v1/export/lists/([^/]+)\.(json|csv))",
             Guard([this, load_list](const httplib::Request& req,
                                     httplib::Response& res) {
               RankingScheme scheme = SchemeFrom(req);
               SiteList list = load_list(req.matches[1]);
               RequireReadable(req, list);
               if (req.matches[2] == "json") {
                 Reply(res, 200, ExportJson(list, scheme));
               } else {
                 res.status = 200;
                 res.set_content(ExportCsv(list, scheme), "text/csv");
               }
             }));

  server.Post("/api/v1/import", Guard([this](const httplib::Request& req,
                                             httplib::Response& res) {
                auto [list, token] = Import(Json::parse(req.body));
                Reply(res, 201,
                      {{"list_id", list.id},
                       {"token", token},
                       {"list", ListToJson(list, true)}});
              }));

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty())
      Reply(res, res.status, {{"error", httplib::status_message(res.status)}});
  });
}

ApiServer::ApiServer(ApiService& service)
    : server_(std::make_unique<httplib::Server>()) {
  service.Mount(*server_);
}

ApiServer::~ApiServer() {
  Stop();
}

bool ApiServer::Start(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
    if (port_ < 0)
      return false;
  } else {
    if (!server_->bind_to_port(host, port))
      return false;
    port_ = port;
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return true;
}

void ApiServer::Stop() {
  if (thread_.joinable()) {
    server_->stop();
    thread_.join();
  }
}

}  // namespace sitebench
