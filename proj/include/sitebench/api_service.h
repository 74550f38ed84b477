#ifndef SITEBENCH_API_SERVICE_H_
#define SITEBENCH_API_SERVICE_H_

#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sitebench/blacklist.h"
#include "sitebench/catalog.h"
#include "sitebench/json_codec.h"
#include "sitebench/orchestrator.h"
#include "sitebench/rate_limiter.h"
#include "sitebench/storage.h"

namespace httplib {
class Server;
}

namespace sitebench {

inline constexpr char kExportFormat[] = "sitebench-list-export";
inline constexpr int kExportVersion = 1;

// Fixed CSV export columns that precede one column per catalog check.
inline constexpr const char* kCsvSiteColumns[] = {
    "url",     "final_url", "scanned_at", "overall",
    "NoTrack", "Attacks",   "EncWeb",     "EncMail"};

Json ListToJson(const SiteList& list, bool with_sites);

// Body of GET /sites/{id}/results; also printed by `scan --json`.
Json SiteResultsJson(const Site& site,
                     const std::optional<std::string>& list_ref,
                     const std::optional<ScanRun>& latest,
                     const std::vector<ScanRun>& history,
                     const CheckCatalog& catalog,
                     const std::optional<std::string>& annotation);

// REST routes under /api/v1. Handlers only touch the store through Storage
// and enqueue work through the Orchestrator.
class ApiService {
 public:
  ApiService(Storage& storage,
             Orchestrator& orchestrator,
             Blacklist& blacklist,
             const CheckCatalog& catalog,
             const ScanClock& clock);

  void Mount(httplib::Server& server);

  // Export document of a list (see docs/openapi.json, ListExport).
  Json ExportJson(const SiteList& list, const RankingScheme& scheme) const;
  std::string ExportCsv(const SiteList& list,
                        const RankingScheme& scheme) const;
  // Creates a list from an export document. Returns the new list and token.
  std::pair<SiteList, std::string> Import(const Json& doc);

 private:
  struct RankedSite {
    Site site;
    std::optional<ScanRun> run;
    SiteRating rating;
  };
  std::vector<RankedSite> Rank(const SiteList& list,
                               const RankingScheme& scheme) const;

  Storage& storage_;
  Orchestrator& orchestrator_;
  Blacklist& blacklist_;
  const CheckCatalog& catalog_;
  const ScanClock& clock_;
};

// httplib server running ApiService on a background thread.
class ApiServer {
 public:
  explicit ApiServer(ApiService& service);
  ~ApiServer();

  // Binds |host|:|port| (0 picks a free port). False when binding fails.
  bool Start(const std::string& host, int port);
  void Stop();
  int port() const { return port_; }

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace sitebench

#endif  // SITEBENCH_API_SERVICE_H_
