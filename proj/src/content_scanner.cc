#include "sitebench/content_scanner.h"

#include <algorithm>
#include <map>
#include <regex>
#include <set>

namespace sitebench {

namespace {

using Attributes = std::map<std::string, std::string>;

const std::regex& TagRe() {
  static const std::regex re(R"(<([a-zA-Z][a-zA-Z0-9]*)\b([^>]*)>)",
                             std::regex::icase | std::regex::optimize);
  return re;
}

Attributes ParseAttributes(std::string_view text) {
  static const std::regex re(
      R"re(([A-Za-z_:][-A-Za-z0-9_:.]*)\s*=\s*(?:"([^"]*)"|'([^']*)'|([^\s"'>]+)))re",
      std::regex::optimize);
  Attributes attrs;
  std::string s(text);
  for (std::sregex_iterator it(s.begin(), s.end(), re), end; it != end; ++it) {
    const std::smatch& m = *it;
    std::string value = m[2].matched   ? m[2].str()
                        : m[3].matched ? m[3].str()
                                       : m[4].str();
    attrs.emplace(ToLowerAscii(m[1].str()), DecodeEntities(value));
  }
  return attrs;
}

void AddUnique(std::vector<std::string>& out,
               std::set<std::string>& seen,
               std::string url) {
  if (seen.insert(url).second)
    out.push_back(std::move(url));
}

std::string Snippet(std::string_view s) {
  std::string out(s.substr(0, 80));
  for (char& c : out) {
    if (c == '\n' || c == '\r' || c == '\t')
      c = ' ';
  }
  return out;
}

std::string FileName(std::string_view url) {
  auto parts = ParseUrl(url);
  if (!parts)
    return {};
  std::string_view path = parts->path;
  path = path.substr(0, path.find('?'));
  auto slash = path.rfind('/');
  return std::string(
      path.substr(slash == std::string_view::npos ? 0 : slash + 1));
}

}  // namespace

std::string DecodeEntities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '&') {
      static const std::pair<std::string_view, char> kEntities[] = {
          {"&amp;", '&'}, {"&quot;", '"'}, {"&#39;", '\''},
          {"&lt;", '<'},  {"&gt;", '>'},   {"&#x27;", '\''}};
      bool done = false;
      for (const auto& [ent, ch] : kEntities) {
        if (s.substr(i, ent.size()) == ent) {
          out += ch;
          i += ent.size() - 1;
          done = true;
          break;
        }
      }
      if (done)
        continue;
    }
    out += s[i];
  }
  return out;
}

std::vector<std::string> ExtractSubresources(std::string_view html_view,
                                             const UrlParts& base) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::string html(html_view);
  static const std::regex css_url(R"(url\(\s*['"]?([^'")\s]+)['"]?\s*\))",
                                  std::regex::icase | std::regex::optimize);
  auto add_css = [&](const std::string& css) {
    for (std::sregex_iterator it(css.begin(), css.end(), css_url), end;
         it != end; ++it) {
      if (auto url = ResolveReference(base, (*it)[1].str()))
        AddUnique(out, seen, *url);
    }
  };
  for (std::sregex_iterator it(html.begin(), html.end(), TagRe()), end;
       it != end; ++it) {
    std::string tag = ToLowerAscii((*it)[1].str());
    Attributes attrs = ParseAttributes((*it)[2].str());
    if (auto style = attrs.find("style"); style != attrs.end())
      add_css(style->second);
    if (tag == "style") {
      size_t body_start = static_cast<size_t>(it->position() + it->length());
      size_t close = ToLowerAscii(html.substr(body_start)).find("</style");
      add_css(html.substr(body_start, close));
      continue;
    }
    if (tag != "script" && tag != "img" && tag != "link" && tag != "iframe")
      continue;
    for (const char* attr : {"src", "href"}) {
      auto a = attrs.find(attr);
      if (a == attrs.end())
        continue;
      if (auto url = ResolveReference(base, TrimWhitespace(a->second)))
        AddUnique(out, seen, *url);
    }
  }
  return out;
}

std::vector<std::string> ExtractInlineScripts(std::string_view html_view) {
  static const std::regex re(R"(<script\b([^>]*)>([\s\S]*?)</script\s*>)",
                             std::regex::icase | std::regex::optimize);
  std::vector<std::string> out;
  std::string html(html_view);
  for (std::sregex_iterator it(html.begin(), html.end(), re), end; it != end;
       ++it) {
    Attributes attrs = ParseAttributes((*it)[1].str());
    if (attrs.count("src"))
      continue;
    std::string body = (*it)[2].str();
    if (!TrimWhitespace(body).empty())
      out.push_back(std::move(body));
  }
  return out;
}

std::optional<std::string> ExtractGenerator(std::string_view html_view) {
  std::string html(html_view);
  for (std::sregex_iterator it(html.begin(), html.end(), TagRe()), end;
       it != end; ++it) {
    if (ToLowerAscii((*it)[1].str()) != "meta")
      continue;
    Attributes attrs = ParseAttributes((*it)[2].str());
    auto name = attrs.find("name");
    auto content = attrs.find("content");
    if (name != attrs.end() && content != attrs.end() &&
        ToLowerAscii(name->second) == "generator")
      return std::string(TrimWhitespace(content->second));
  }
  return std::nullopt;
}

std::optional<ObservedCookie> ParseSetCookie(std::string_view value,
                                             std::string_view host) {
  auto semi = value.find(';');
  std::string_view pair = value.substr(0, semi);
  auto eq = pair.find('=');
  if (eq == std::string_view::npos)
    return std::nullopt;
  ObservedCookie cookie;
  cookie.name = std::string(TrimWhitespace(pair.substr(0, eq)));
  if (cookie.name.empty())
    return std::nullopt;
  cookie.domain = ToLowerAscii(host);
  std::string_view rest = semi == std::string_view::npos
                              ? std::string_view()
                              : value.substr(semi + 1);
  while (!rest.empty()) {
    auto next = rest.find(';');
    std::string_view attr = TrimWhitespace(rest.substr(0, next));
    auto aeq = attr.find('=');
    if (aeq != std::string_view::npos &&
        ToLowerAscii(TrimWhitespace(attr.substr(0, aeq))) == "domain") {
      std::string domain = ToLowerAscii(TrimWhitespace(attr.substr(aeq + 1)));
      while (!domain.empty() && domain.front() == '.')
        domain.erase(0, 1);
      if (!domain.empty())
        cookie.domain = domain;
    }
    if (next == std::string_view::npos)
      break;
    rest.remove_prefix(next + 1);
  }
  return cookie;
}

std::vector<ObservedCookie> ScriptCookies(std::string_view script_view,
                                          std::string_view page_host) {
  static const std::regex re(
      R"re(document\.cookie\s*=\s*(["'`])\s*([^=;"'`\s]+)\s*=([^"'`]*))re",
      std::regex::optimize);
  std::vector<ObservedCookie> out;
  std::string script(script_view);
  for (std::sregex_iterator it(script.begin(), script.end(), re), end;
       it != end; ++it) {
    std::string header = (*it)[2].str() + "=" + (*it)[3].str();
    if (auto cookie = ParseSetCookie(header, page_host))
      out.push_back(*cookie);
  }
  return out;
}

FetchError FetchSite(std::string_view url,
                     const HttpFetcher& fetcher,
                     const ContentScanOptions& options,
                     PageBundle* out) {
  FetchResult page = fetcher.Get(url, options.limits);
  if (page.error != FetchError::kNone)
    return page.error;
  const HttpResponse& final = page.response;
  out->final_url = final.url;
  out->status = final.status;
  out->headers = final.headers;
  out->body = final.body;
  out->redirect_chain = page.redirect_chain;

  auto add_cookies = [&](const HttpResponse& r) {
    std::string host = HostOf(r.url);
    for (const std::string& v : r.Headers("set-cookie")) {
      if (auto c = ParseSetCookie(v, host))
        out->cookies.push_back(*c);
    }
  };
  for (const HttpResponse& r : page.redirect_responses)
    add_cookies(r);
  add_cookies(final);

  UrlParts base = *ParseUrl(final.url);
  out->subresources = ExtractSubresources(final.body, base);
  for (std::string& body : ExtractInlineScripts(final.body)) {
    for (const ObservedCookie& c : ScriptCookies(body, base.host))
      out->cookies.push_back(c);
    out->scripts.push_back({"", std::move(body)});
  }

  // External scripts: <script src> URLs in document order.
  static const std::regex script_src(R"(<script\b([^>]*)>)",
                                     std::regex::icase | std::regex::optimize);
  std::vector<std::string> script_urls;
  for (std::sregex_iterator
           it(final.body.begin(), final.body.end(), script_src),
       end;
       it != end; ++it) {
    Attributes attrs = ParseAttributes((*it)[1].str());
    auto src = attrs.find("src");
    if (src == attrs.end())
      continue;
    if (auto u = ResolveReference(base, TrimWhitespace(src->second))) {
      if (std::find(script_urls.begin(), script_urls.end(), *u) ==
          script_urls.end())
        script_urls.push_back(*u);
    }
  }
  FetchLimits script_limits = options.limits;
  script_limits.max_redirects = 3;
  script_limits.max_body = options.max_script_body;
  script_limits.truncate_body = true;
  int fetched = 0;
  for (const std::string& u : script_urls) {
    if (fetched++ >= options.max_scripts)
      break;
    FetchResult r = fetcher.Get(u, script_limits);
    if (r.error != FetchError::kNone)
      continue;
    for (const HttpResponse& hop : r.redirect_responses)
      add_cookies(hop);
    add_cookies(r.response);
    if (r.response.status >= 200 && r.response.status < 300)
      out->scripts.push_back({u, std::move(r.response.body)});
  }
  return FetchError::kNone;
}

ContentFacts ExtractContentFacts(const PageBundle& bundle,
                                 const FilterSet& filters,
                                 std::string_view site_host_in,
                                 const SignatureSet& signatures) {
  const PublicSuffixList& psl = signatures.public_suffixes;
  std::string site_host = ToLowerAscii(site_host_in);
  ContentFacts facts;
  facts.final_url = bundle.final_url;
  facts.redirect_chain = bundle.redirect_chain;

  std::vector<std::string> third_party_urls;
  for (const std::string& url : bundle.subresources) {
    auto parts = ParseUrl(url);
    if (!parts || psl.SameRegistrableDomain(parts->host, site_host))
      continue;
    facts.third_party_hosts.insert(parts->host);
    third_party_urls.push_back(url);
  }
  facts.tracker_hosts = ClassifyHosts(filters, third_party_urls);

  std::set<std::pair<std::string, std::string>> distinct;
  for (const ObservedCookie& c : bundle.cookies) {
    if (!distinct.insert({c.name, c.domain}).second)
      continue;
    if (psl.SameRegistrableDomain(c.domain, site_host))
      ++facts.cookies_first_party;
    else
      ++facts.cookies_third_party;
  }

  auto header = [&](std::string_view name) -> std::optional<std::string> {
    std::string lower = ToLowerAscii(name);
    for (const auto& [k, v] : bundle.headers) {
      if (k == lower)
        return v;
    }
    return std::nullopt;
  };
  for (std::string_view name : kSecurityHeaders)
    facts.security_headers[std::string(name)] = header(name);

  if (bundle.final_url.rfind("https://", 0) == 0) {
    for (const std::string& url : bundle.subresources) {
      if (url.rfind("http://", 0) == 0)
        facts.mixed_content_urls.push_back(url);
    }
  }

  for (const FingerprintSignature& sig : signatures.fingerprints) {
    for (const ScriptSource& script : bundle.scripts) {
      std::smatch m;
      if (std::regex_search(script.body, m, sig.re)) {
        facts.fingerprint_hits.push_back({sig.id, Snippet(m.str())});
        break;
      }
    }
  }

  facts.server_banner = header("server");
  facts.generator = ExtractGenerator(bundle.body);

  std::set<std::pair<std::string, std::string>> libs_seen;
  auto add_lib = [&](const LibSignature& lib, std::string version) {
    if (libs_seen.insert({lib.name, version}).second)
      facts.script_libs.push_back({lib.name, std::move(version), lib.latest});
  };
  for (const std::string& url : bundle.subresources) {
    std::string file = ToLowerAscii(FileName(url));
    if (file.size() < 3 || file.substr(file.size() - 3) != ".js")
      continue;
    for (const LibSignature& lib : signatures.libs) {
      std::smatch m;
      if (std::regex_search(file, m, lib.filename_re)) {
        add_lib(lib, m[1].str());
        break;
      }
    }
  }
  // Banner comments such as "/*! jQuery v1.8.2".
  static const std::regex meta_chars(R"([.^$|()\[\]{}*+?\\])");
  std::vector<std::regex> banners;
  for (const LibSignature& lib : signatures.libs) {
    banners.emplace_back("/\\*!?\\s*" +
                             std::regex_replace(lib.name, meta_chars, "\\$&") +
                             R"(\s+v?(\d+(?:\.\d+)+))",
                         std::regex::icase);
  }
  for (const ScriptSource& script : bundle.scripts) {
    std::string head = script.body.substr(0, 512);
    for (size_t i = 0; i < signatures.libs.size(); ++i) {
      std::smatch m;
      if (std::regex_search(head, m, banners[i]))
        add_lib(signatures.libs[i], m[1].str());
    }
  }

  std::set<std::pair<std::string, std::string>> cdn_seen;
  std::vector<std::string> hosts;
  if (auto final = ParseUrl(bundle.final_url))
    hosts.push_back(final->host);
  for (const std::string& url : bundle.subresources) {
    if (auto parts = ParseUrl(url)) {
      if (std::find(hosts.begin(), hosts.end(), parts->host) == hosts.end())
        hosts.push_back(parts->host);
    }
  }
  for (const std::string& host : hosts) {
    for (const CdnSignature& cdn : signatures.cdns) {
      if (!cdn.is_header() && HostHasSuffix(host, cdn.host_suffix) &&
          cdn_seen.insert({host, cdn.cdn}).second)
        facts.cdn_hosts.push_back({host, cdn.cdn});
    }
  }
  if (!hosts.empty()) {
    for (const CdnSignature& cdn : signatures.cdns) {
      if (!cdn.is_header())
        continue;
      for (const auto& [k, v] : bundle.headers) {
        std::string line = k + ": " + v;
        if (std::regex_search(line, cdn.header_re)) {
          if (cdn_seen.insert({hosts.front(), cdn.cdn}).second)
            facts.cdn_hosts.push_back({hosts.front(), cdn.cdn});
          break;
        }
      }
    }
  }
  return facts;
}

}  // namespace sitebench
