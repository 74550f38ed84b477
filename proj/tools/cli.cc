#include "cli.h"

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "sitebench/api_service.h"
#include "sitebench/config.h"
#include "sitebench/csv.h"
#include "sitebench/openapi.h"
#include "sitebench/ranking.h"
#include "sitebench/url.h"

namespace sitebench {

namespace {

ServiceConfig ConfigFrom(const std::string& path) {
  return path.empty() ? ServiceConfig{} : LoadConfig(path);
}

std::string ReadInput(const std::string& path) {
  if (path == "-") {
    std::stringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs queued jobs on the orchestrator's workers until none is left.
void Drain(Orchestrator& orch, Storage& store) {
  orch.Start();
  while (store.CountJobs(ScanStatus::kQueued) +
             store.CountJobs(ScanStatus::kRunning) >
         0)
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  orch.Stop();
}

// In-memory scanning stack used by the one-shot commands.
struct LocalStack {
  explicit LocalStack(const ServiceConfig& config)
      : context(BuildScanContext(config)),
        blacklist(std::filesystem::exists(config.blacklist)
                      ? Blacklist(config.blacklist)
                      : Blacklist()),
        scanner(context),
        orch(store, blacklist, scanner, clock, config.orchestrator),
        api(store, orch, blacklist, context.catalog, clock) {}

  ScanContext context;
  Storage store{":memory:"};
  Blacklist blacklist;
  NetworkJobScanner scanner;
  SystemScanClock clock;
  Orchestrator orch;
  ApiService api;
};

std::string Cell(const Json& color) {
  return color.is_string() ? color.get<std::string>() : "-";
}

void PrintResults(const Json& results, std::ostream& out) {
  const Json& run = results["run"];
  out << "url:     " << results["site"]["url"].get<std::string>() << "\n";
  if (results["site"]["final_url"].is_string())
    out << "final:   " << results["site"]["final_url"].get<std::string>()
        << "\n";
  out << "overall: " << Cell(run["overall"]) << "\n";
  for (CheckGroup g : kAllGroups) {
    std::string group(GroupName(g));
    out << "\n" << group << ": " << Cell(run["group_ratings"][group]) << "\n";
    for (const Json& check : run["checks"]) {
      if (check["group"] != group)
        continue;
      out << "  " << std::left << std::setw(8)
          << check["outcome"].get<std::string>() << std::setw(34)
          << check["check_id"].get<std::string>()
          << check["evidence"].get<std::string>() << "\n";
    }
  }
  for (const Json& e : run["module_errors"])
    out << "module error: " << e.get<std::string>() << "\n";
}

void PrintRanking(const Json& exported, std::ostream& out) {
  out << std::left << std::setw(6) << "rank" << std::setw(9) << "overall";
  for (CheckGroup g : kAllGroups)
    out << std::setw(9) << GroupName(g);
  out << "url\n";
  for (const Json& row : exported["ranking"]) {
    out << std::setw(6) << row["rank"].get<int>() << std::setw(9)
        << Cell(row["overall"]);
    for (CheckGroup g : kAllGroups)
      out << std::setw(9)
          << Cell(row["group_ratings"][std::string(GroupName(g))]);
    out << row["url"].get<std::string>() << "\n";
  }
}

int ScanCommand(const std::string& config_path,
                const std::string& raw_url,
                bool json,
                std::ostream& out,
                std::ostream& err) {
  ServiceConfig config = ConfigFrom(config_path);
  std::string url = NormalizeUrl(raw_url);
  LocalStack stack(config);
  Site site = stack.store.UnlistedSite(url);
  EnqueueResult job = stack.orch.Enqueue(site, std::nullopt);
  Drain(stack.orch, stack.store);
  std::optional<ScanRun> run = stack.store.GetRun(job.job.id);
  if (!run)
    throw std::runtime_error("run vanished");
  if (run->status == ScanStatus::kBlacklisted) {
    err << url << ": " << run->note << "\n";
    return kExitOptedOut;
  }
  if (run->status != ScanStatus::kDone) {
    err << url << ": " << run->note << "\n";
    return kExitError;
  }
  site = stack.store.GetSite(site.id)->site;
  Json results =
      SiteResultsJson(site, std::nullopt, run, stack.store.RunHistory(site.id),
                      stack.context.catalog, std::nullopt);
  if (json)
    out << DumpJson(results, 2) << "\n";
  else
    PrintResults(results, out);
  // Unreachable sites still get results, e.g. DNS and mail checks.
  if (run->note == kUnreachableNote) {
    err << url << ": " << run->note << "\n";
    return kExitUnreachable;
  }
  return kExitOk;
}

int ScanListCommand(const std::string& config_path,
                    const std::string& path,
                    const std::string& order,
                    bool honor_robots,
                    bool json,
                    bool csv,
                    std::ostream& out,
                    std::ostream& err) {
  ServiceConfig config = ConfigFrom(config_path);
  RankingScheme scheme =
      order.empty() ? RankingScheme{} : ParseGroupOrder(order);
  SiteCsv parsed = ParseSiteCsv(ReadInput(path));
  LocalStack stack(config);
  SiteList list;
  list.title = std::filesystem::path(path).filename().string();
  list.property_schema = std::move(parsed.property_schema);
  list.sites = std::move(parsed.sites);
  list.honor_robots = honor_robots;
  list.rescan_enabled = false;
  list.access_token_hash = "local";
  list.created_at = stack.clock.Now();
  ConformProperties(list);
  ValidateSiteList(list);
  stack.store.CreateList(list);
  for (const Site& s : list.sites)
    stack.orch.Enqueue(s, list.id);
  Drain(stack.orch, stack.store);
  for (const Site& s : list.sites) {
    std::vector<ScanRun> history = stack.store.RunHistory(s.id);
    if (!history.empty() && history.back().status != ScanStatus::kDone)
      err << s.url << ": " << history.back().note << "\n";
  }
  list = *stack.store.GetList(list.id);
  if (json)
    out << DumpJson(stack.api.ExportJson(list, scheme), 2) << "\n";
  else if (csv)
    out << stack.api.ExportCsv(list, scheme);
  else
    PrintRanking(stack.api.ExportJson(list, scheme), out);
  return kExitOk;
}

int ServeCommand(const std::string& config_path, std::ostream& out) {
  ServiceConfig config = ConfigFrom(config_path);
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ScanContext context = BuildScanContext(config);
  Storage store(config.database);
  Blacklist blacklist(config.blacklist);
  NetworkJobScanner scanner(context);
  SystemScanClock clock;
  Orchestrator orch(store, blacklist, scanner, clock, config.orchestrator);
  ApiService api(store, orch, blacklist, context.catalog, clock);
  ApiServer server(api);
  if (!server.Start(config.listen_host, config.listen_port))
    throw std::runtime_error("cannot listen on " + config.listen_host + ":" +
                             std::to_string(config.listen_port));
  orch.Start();
  out << "listening on http://" << config.listen_host << ":" << server.port()
      << "/api/v1/" << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  out << "shutting down" << std::endl;
  server.Stop();
  orch.Stop();
  return kExitOk;
}

}  // namespace

int RunCli(int argc,
           const char* const* argv,
           std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Benchmark web sites on privacy and security checks."};
  app.name("sitebench");
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("-c,--config", config_path, "Configuration file")
      ->check(CLI::ExistingFile);

  CLI::App* scan = app.add_subcommand("scan", "Scan one site");
  std::string url;
  bool json = false;
  scan->add_option("url", url, "Site URL")->required();
  scan->add_flag("--json", json, "Print results as JSON");

  CLI::App* scan_list = app.add_subcommand(
      "scan-list", "Scan the sites of a CSV file and rank them");
  std::string csv_path;
  std::string order;
  bool honor_robots = false;
  bool as_csv = false;
  scan_list->add_option("file", csv_path, "CSV file with a url column, or -")
      ->required();
  scan_list->add_option("--order", order,
                        "Group priority, e.g. EncWeb,NoTrack,Attacks,EncMail");
  scan_list->add_flag("--honor-robots", honor_robots,
                      "Skip sites whose robots.txt disallows scanning");
  scan_list->add_flag("--json", json, "Print the list export document");
  scan_list->add_flag("--csv", as_csv, "Print the CSV export");

  CLI::App* serve = app.add_subcommand("serve", "Run the API and scan workers");

  CLI::App* bl = app.add_subcommand("blacklist", "Manage the opt-out list");
  bl->require_subcommand(1);
  CLI::App* bl_add = bl->add_subcommand("add", "Add a host or URL prefix");
  std::string pattern;
  std::string note;
  bl_add->add_option("pattern", pattern, "Host or URL prefix")->required();
  bl_add->add_option("--note", note, "Reason shown to operators");
  CLI::App* bl_list = bl->add_subcommand("list", "Print entries");

  CLI::App* openapi =
      app.add_subcommand("openapi", "Print the OpenAPI document");
  CLI::App* catalog =
      app.add_subcommand("catalog", "Print the check catalog file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  try {
    if (*scan)
      return ScanCommand(config_path, url, json, out, err);
    if (*scan_list)
      return ScanListCommand(config_path, csv_path, order, honor_robots, json,
                             as_csv, out, err);
    if (*serve)
      return ServeCommand(config_path, out);
    if (*openapi) {
      out << DumpJson(OpenApiSpec(), 2) << "\n";
      return kExitOk;
    }
    if (*catalog) {
      ServiceConfig config = ConfigFrom(config_path);
      out << (config.catalog.empty() ? CheckCatalog::Default()
                                     : CheckCatalog::LoadFile(config.catalog))
                 .Serialize();
      return kExitOk;
    }
    ServiceConfig config = ConfigFrom(config_path);
    Blacklist blacklist(config.blacklist);
    if (*bl_add) {
      bool added = blacklist.Add(pattern, note);
      out << (added ? "added " : "already listed ")
          << Blacklist::NormalizePattern(pattern) << "\n";
      return kExitOk;
    }
    if (*bl_list) {
      for (const BlacklistEntry& e : blacklist.entries())
        out << e.pattern << "\t" << FormatTimestamp(e.added_at) << "\t"
            << e.note << "\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace sitebench
