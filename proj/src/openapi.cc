#include "sitebench/openapi.h"

#include <string>

namespace sitebench {

namespace {

Json Ref(const std::string& schema) {
  return {{"$ref", "#/components/schemas/" + schema}};
}

Json JsonContent(const Json& schema) {
  return {{"application/json", {{"schema", schema}}}};
}

Json Response(const std::string& description, const Json& schema) {
  return {{"description", description}, {"content", JsonContent(schema)}};
}

Json ErrorResponse(const std::string& description) {
  return Response(description, Ref("Error"));
}

Json PathParam(const std::string& name, const std::string& description) {
  return {{"name", name},
          {"in", "path"},
          {"required", true},
          {"description", description},
          {"schema", {{"type", "string"}}}};
}

Json QueryParam(const std::string& name,
                const Json& schema,
                const std::string& description) {
  return {{"name", name},
          {"in", "query"},
          {"required", false},
          {"description", description},
          {"schema", schema}};
}

Json OrderParam() {
  return QueryParam(
      "order",
      {{"type", "string"}, {"example", "EncWeb,NoTrack,Attacks,EncMail"}},
      "Group priority for ranking; must name every group exactly once.");
}

Json Nullable(Json schema) {
  schema["nullable"] = true;
  return schema;
}

Json StringType() {
  return {{"type", "string"}};
}

Json Strings() {
  return {{"type", "array"}, {"items", StringType()}};
}

Json Enum(std::initializer_list<const char*> values) {
  Json e = Json::array();
  for (const char* v : values)
    e.push_back(v);
  return {{"type", "string"}, {"enum", e}};
}

Json ColorEnum() {
  return Enum({"green", "yellow", "neutral", "red"});
}

Json Object(const Json& properties,
            std::initializer_list<const char*> required) {
  Json j = {{"type", "object"}, {"properties", properties}};
  if (required.size() > 0) {
    Json r = Json::array();
    for (const char* name : required)
      r.push_back(name);
    j["required"] = r;
  }
  return j;
}

Json Schemas() {
  Json s;
  s["Error"] = Object({{"error", StringType()}}, {"error"});
  s["Properties"] = {{"type", "object"},
                     {"additionalProperties", Nullable(StringType())}};
  s["Site"] = Object({{"id", StringType()},
                      {"url", StringType()},
                      {"final_url", Nullable(StringType())},
                      {"properties", Ref("Properties")}},
                     {"id", "url", "properties"});
  s["GroupRatings"] = Object({{"NoTrack", Nullable(ColorEnum())},
                              {"Attacks", Nullable(ColorEnum())},
                              {"EncWeb", Nullable(ColorEnum())},
                              {"EncMail", Nullable(ColorEnum())}},
                             {});
  s["SiteList"] =
      Object({{"id", StringType()},
              {"title", StringType()},
              {"description", StringType()},
              {"tags", Strings()},
              {"property_schema", Strings()},
              {"private", {{"type", "boolean"}}},
              {"rescan", {{"type", "boolean"}}},
              {"honor_robots", {{"type", "boolean"}}},
              {"created_at", {{"type", "string"}, {"format", "date-time"}}},
              {"site_count", {{"type", "integer"}}},
              {"sites", {{"type", "array"}, {"items", Ref("Site")}}}},
             {"id", "title", "tags", "private"});
  Json site_input = {{"oneOf",
                      {StringType(), Object({{"url", StringType()},
                                             {"properties", Ref("Properties")}},
                                            {"url"})}}};
  s["ListInput"] =
      Object({{"title", StringType()},
              {"description", StringType()},
              {"tags", Strings()},
              {"property_schema", Strings()},
              {"private", {{"type", "boolean"}}},
              {"rescan", {{"type", "boolean"}}},
              {"honor_robots", {{"type", "boolean"}}},
              {"sites", {{"type", "array"}, {"items", site_input}}}},
             {});
  s["ListCreated"] = Object({{"list_id", StringType()},
                             {"token", StringType()},
                             {"list", Ref("SiteList")}},
                            {"list_id", "token", "list"});
  s["CheckResult"] =
      Object({{"check_id", StringType()},
              {"group", Enum({"NoTrack", "Attacks", "EncWeb", "EncMail"})},
              {"outcome", Enum({"pass", "fail", "neutral", "error"})},
              {"critical", {{"type", "boolean"}}},
              {"evidence", StringType()},
              {"title", Nullable(StringType())},
              {"criterion", Nullable(StringType())}},
             {"check_id", "group", "outcome"});
  s["RunSummary"] = Object(
      {{"id", StringType()},
       {"status", Enum({"queued", "running", "done", "failed", "blacklisted"})},
       {"started_at", Nullable(StringType())},
       {"finished_at", Nullable(StringType())},
       {"note", StringType()}},
      {"id", "status"});
  s["SiteResults"] = Object(
      {{"site", Ref("Site")},
       {"list_id", Nullable(StringType())},
       {"run",
        Nullable(Object(
            {{"id", StringType()},
             {"status", StringType()},
             {"started_at", StringType()},
             {"finished_at", StringType()},
             {"module_errors", Strings()},
             {"note", StringType()},
             {"group_ratings", Ref("GroupRatings")},
             {"overall", Nullable(ColorEnum())},
             {"checks", {{"type", "array"}, {"items", Ref("CheckResult")}}}},
            {}))},
       {"history", {{"type", "array"}, {"items", Ref("RunSummary")}}},
       {"annotation", Nullable(StringType())}},
      {"site", "run", "history"});
  s["Ranking"] =
      Object({{"list_id", StringType()},
              {"order", StringType()},
              {"rows",
               {{"type", "array"},
                {"items", Object({{"rank", {{"type", "integer"}}},
                                  {"site", Ref("Site")},
                                  {"group_ratings", Ref("GroupRatings")},
                                  {"overall", Nullable(ColorEnum())},
                                  {"scanned_at", Nullable(StringType())}},
                                 {"rank", "site"})}}},
              {"stats",
               {{"type", "object"},
                {"description",
                 "Per group, the number of scanned sites of each color."},
                {"additionalProperties",
                 {{"type", "object"},
                  {"additionalProperties", {{"type", "integer"}}}}}}}},
             {"list_id", "order", "rows"});
  s["ListExport"] = Object(
      {{"format", {{"type", "string"}, {"enum", {"sitebench-list-export"}}}},
       {"version", {{"type", "integer"}, {"enum", {1}}}},
       {"list", Ref("SiteList")},
       {"order", StringType()},
       {"sites",
        {{"type", "array"},
         {"items", Object({{"id", StringType()},
                           {"url", StringType()},
                           {"final_url", Nullable(StringType())},
                           {"properties", Ref("Properties")},
                           {"latest_run", Nullable({{"type", "object"}})}},
                          {"url", "properties", "latest_run"})}}},
       {"ranking", {{"type", "array"}, {"items", {{"type", "object"}}}}}},
      {"format", "version", "list", "sites"});
  return s;
}

Json Paths() {
  Json bearer = Json::array({{{"bearerToken", Json::array()}}});
  Json optional_bearer =
      Json::array({Json::object(), {{"bearerToken", Json::array()}}});
  Json list_id = PathParam("list_id", "List id.");
  Json p;

  p["/api/v1/lists"]["get"] = {
      {"summary", "Search public lists"},
      {"security", Json::array()},
      {"parameters",
       {QueryParam("q", StringType(), "Substring of title or description."),
        QueryParam("tag", StringType(), "Exact tag."),
        QueryParam("limit",
                   {{"type", "integer"},
                    {"minimum", 1},
                    {"maximum", 500},
                    {"default", 50}},
                   "Page size."),
        QueryParam("offset",
                   {{"type", "integer"}, {"minimum", 0}, {"default", 0}},
                   "Rows to skip.")}},
      {"responses",
       {{"200",
         Response("A page of lists, newest first.",
                  Object({{"total", {{"type", "integer"}}},
                          {"limit", {{"type", "integer"}}},
                          {"offset", {{"type", "integer"}}},
                          {"lists",
                           {{"type", "array"}, {"items", Ref("SiteList")}}}},
                         {"total", "lists"}))},
        {"400", ErrorResponse("Bad paging parameter.")}}}};
  p["/api/v1/lists"]["post"] = {
      {"summary", "Create a list and queue its sites"},
      {"description",
       "Accepts a JSON body or a CSV body whose first column is url. With "
       "CSV, metadata comes from the title, description, tags, private, "
       "rescan and honor_robots query parameters. The access token is "
       "returned once."},
      {"security", Json::array()},
      {"requestBody",
       {{"required", true},
        {"content",
         {{"application/json", {{"schema", Ref("ListInput")}}},
          {"text/csv", {{"schema", StringType()}}}}}}},
      {"responses",
       {{"201", Response("Created.", Ref("ListCreated"))},
        {"400", ErrorResponse("Malformed body or URL.")},
        {"422", ErrorResponse("Empty list or duplicate URLs.")}}}};

  p["/api/v1/lists/{list_id}"]["parameters"] = {list_id};
  p["/api/v1/lists/{list_id}"]["get"] = {
      {"summary", "Get a list with its sites"},
      {"security", optional_bearer},
      {"responses",
       {{"200", Response("The list.", Ref("SiteList"))},
        {"403", ErrorResponse("Private list without a valid token.")},
        {"404", ErrorResponse("Unknown list.")}}}};
  p["/api/v1/lists/{list_id}"]["put"] = {
      {"summary", "Update list fields"},
      {"description",
       "Fields absent from the body keep their values. New sites are queued."},
      {"security", bearer},
      {"requestBody",
       {{"required", true}, {"content", JsonContent(Ref("ListInput"))}}},
      {"responses",
       {{"200", Response("The updated list.", Ref("SiteList"))},
        {"400", ErrorResponse("Malformed body.")},
        {"403", ErrorResponse("Missing or invalid token.")},
        {"404", ErrorResponse("Unknown list.")},
        {"422", ErrorResponse("Invalid list.")}}}};
  p["/api/v1/lists/{list_id}"]["delete"] = {
      {"summary", "Delete a list"},
      {"security", bearer},
      {"responses",
       {{"200", Response("Deleted.",
                         Object({{"deleted", StringType()}}, {"deleted"}))},
        {"403", ErrorResponse("Missing or invalid token.")},
        {"404", ErrorResponse("Unknown list.")}}}};

  p["/api/v1/lists/{list_id}/scan"]["parameters"] = {list_id};
  p["/api/v1/lists/{list_id}/scan"]["post"] = {
      {"summary", "Queue a scan of every site"},
      {"security", bearer},
      {"responses",
       {{"202",
         Response(
             "Queued.",
             Object({{"jobs",
                      {{"type", "array"},
                       {"items", Object({{"run_id", StringType()},
                                         {"site_id", StringType()},
                                         {"status", StringType()},
                                         {"duplicate", {{"type", "boolean"}}}},
                                        {})}}}},
                    {"jobs"}))},
        {"403", ErrorResponse("Missing or invalid token.")},
        {"404", ErrorResponse("Unknown list.")}}}};

  p["/api/v1/lists/{list_id}/ranking"]["parameters"] = {list_id};
  p["/api/v1/lists/{list_id}/ranking"]["get"] = {
      {"summary", "Ranked sites with group colors"},
      {"security", optional_bearer},
      {"parameters", {OrderParam()}},
      {"responses",
       {{"200", Response("Ranking.", Ref("Ranking"))},
        {"400", ErrorResponse("order is not a permutation of the groups.")},
        {"403", ErrorResponse("Private list without a valid token.")},
        {"404", ErrorResponse("Unknown list.")}}}};

  p["/api/v1/sites/{site_id}/results"]["parameters"] = {
      PathParam("site_id", "Site id.")};
  p["/api/v1/sites/{site_id}/results"]["get"] = {
      {"summary", "Latest completed results and run history of a site"},
      {"security", optional_bearer},
      {"responses",
       {{"200", Response("Results.", Ref("SiteResults"))},
        {"403", ErrorResponse("Site of a private list without a valid token.")},
        {"404", ErrorResponse("Unknown site.")}}}};

  p["/api/v1/runs/{run_id}"]["parameters"] = {PathParam("run_id", "Run id.")};
  p["/api/v1/runs/{run_id}"]["get"] = {
      {"summary", "Status and results of one run"},
      {"security", optional_bearer},
      {"responses",
       {{"200", Response("Run.", Ref("RunSummary"))},
        {"403", ErrorResponse("Run of a private list without a valid token.")},
        {"404", ErrorResponse("Unknown run.")}}}};

  p["/api/v1/scan"]["post"] = {
      {"summary", "Queue a scan of a single site"},
      {"security", Json::array()},
      {"requestBody",
       {{"required", true},
        {"content", JsonContent(Object({{"url", StringType()}}, {"url"}))}}},
      {"responses",
       {{"202", Response("Queued.", Object({{"run_id", StringType()},
                                            {"site_id", StringType()},
                                            {"status", StringType()}},
                                           {"run_id", "site_id", "status"}))},
        {"400", ErrorResponse("Malformed body or URL.")},
        {"429",
         {{"description",
           "The host is being scanned or was scanned within the per-host "
           "interval."},
          {"headers", {{"Retry-After", {{"schema", {{"type", "integer"}}}}}}},
          {"content", JsonContent(Ref("Error"))}}}}}};

  p["/api/v1/export/lists/{list_id}.json"]["parameters"] = {list_id};
  p["/api/v1/export/lists/{list_id}.json"]["get"] = {
      {"summary", "Export a list with its latest results"},
      {"security", optional_bearer},
      {"parameters", {OrderParam()}},
      {"responses",
       {{"200", Response("Export document.", Ref("ListExport"))},
        {"400", ErrorResponse("Bad order.")},
        {"403", ErrorResponse("Private list without a valid token.")},
        {"404", ErrorResponse("Unknown list.")}}}};
  p["/api/v1/export/lists/{list_id}.csv"]["parameters"] = {list_id};
  p["/api/v1/export/lists/{list_id}.csv"]["get"] = {
      {"summary", "Export the ranking as CSV"},
      {"description",
       "Columns: url, final_url, scanned_at, overall, one per group, then "
       "one outcome column per catalog check. Rows are in ranking order."},
      {"security", optional_bearer},
      {"parameters", {OrderParam()}},
      {"responses",
       {{"200",
         {{"description", "CSV."},
          {"content", {{"text/csv", {{"schema", StringType()}}}}}}},
        {"400", ErrorResponse("Bad order.")},
        {"403", ErrorResponse("Private list without a valid token.")},
        {"404", ErrorResponse("Unknown list.")}}}};

  p["/api/v1/import"]["post"] = {
      {"summary", "Create a list from an export document"},
      {"security", Json::array()},
      {"requestBody",
       {{"required", true}, {"content", JsonContent(Ref("ListExport"))}}},
      {"responses",
       {{"201", Response("Created with a fresh token.", Ref("ListCreated"))},
        {"400", ErrorResponse("Not an export document.")},
        {"422", ErrorResponse("Invalid list.")}}}};

  p["/api/v1/catalog"]["get"] = {
      {"summary", "The check catalog"},
      {"security", Json::array()},
      {"responses",
       {{"200",
         Response("Checks in catalog order.",
                  Object({{"checks",
                           {{"type", "array"}, {"items", Ref("CheckResult")}}}},
                         {"checks"}))}}}};
  p["/api/v1/openapi.json"]["get"] = {
      {"summary", "This document"},
      {"security", Json::array()},
      {"responses",
       {{"200", Response("OpenAPI document.", {{"type", "object"}})}}}};
  return p;
}

Json Build() {
  return {{"openapi", "3.0.3"},
          {"info",
           {{"title", "sitebench API"},
            {"version", "1.0.0"},
            {"description",
             "Benchmark lists of web sites on privacy and security checks "
             "and rank them by group colors."}}},
          {"paths", Paths()},
          {"components",
           {{"schemas", Schemas()},
            {"securitySchemes",
             {{"bearerToken",
               {{"type", "http"},
                {"scheme", "bearer"},
                {"description",
                 "Access token returned when a list is created."}}}}}}}};
}

}  // namespace

const Json& OpenApiSpec() {
  static const Json* doc = new Json(Build());
  return *doc;
}

}  // namespace sitebench
