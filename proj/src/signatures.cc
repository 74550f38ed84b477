#include "sitebench/signatures.h"

#include <fstream>
#include <sstream>

#include "sitebench/url.h"

namespace sitebench {

namespace {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw SignatureError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Splits non-comment lines into tab-separated fields and checks the count.
template <typename RowFn>
void ForEachRow(std::string_view text,
                size_t fields,
                std::string_view table,
                RowFn&& fn) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r')
      raw.pop_back();
    std::string_view line = raw;
    if (TrimWhitespace(line).empty() || TrimWhitespace(line).front() == '#')
      continue;
    std::vector<std::string> cols;
    while (true) {
      auto tab = line.find('\t');
      cols.emplace_back(line.substr(0, tab));
      if (tab == std::string_view::npos)
        break;
      line.remove_prefix(tab + 1);
    }
    if (cols.size() != fields)
      throw SignatureError(std::string(table) + " line " +
                           std::to_string(line_no) + ": expected " +
                           std::to_string(fields) + " tab-separated fields");
    try {
      fn(cols);
    } catch (const std::regex_error& e) {
      throw SignatureError(std::string(table) + " line " +
                           std::to_string(line_no) +
                           ": bad regex: " + e.what());
    }
  }
}

}  // namespace

std::vector<FingerprintSignature> ParseFingerprints(std::string_view text) {
  std::vector<FingerprintSignature> out;
  ForEachRow(text, 2, "fingerprints.tsv", [&](std::vector<std::string>& c) {
    out.push_back({c[0], c[1], std::regex(c[1], std::regex::ECMAScript)});
  });
  return out;
}

std::vector<CdnSignature> ParseCdnSignatures(std::string_view text) {
  std::vector<CdnSignature> out;
  ForEachRow(text, 2, "cdn.tsv", [&](std::vector<std::string>& c) {
    CdnSignature sig;
    sig.cdn = c[0];
    if (c[1].rfind("header:", 0) == 0) {
      sig.header_pattern = c[1].substr(7);
      sig.header_re = std::regex(sig.header_pattern,
                                 std::regex::ECMAScript | std::regex::icase);
    } else {
      sig.host_suffix = ToLowerAscii(c[1]);
    }
    out.push_back(std::move(sig));
  });
  return out;
}

std::vector<LibSignature> ParseLibSignatures(std::string_view text) {
  std::vector<LibSignature> out;
  ForEachRow(text, 3, "libs.tsv", [&](std::vector<std::string>& c) {
    std::regex re(c[2], std::regex::ECMAScript | std::regex::icase);
    if (re.mark_count() < 1)
      throw SignatureError("libs.tsv: pattern for " + c[0] +
                           " must capture the version");
    out.push_back({c[0], c[1], c[2], std::move(re)});
  });
  return out;
}

SignatureSet SignatureSet::LoadDir(const std::string& dir) {
  SignatureSet set;
  set.fingerprints = ParseFingerprints(ReadFile(dir + "/fingerprints.tsv"));
  set.cdns = ParseCdnSignatures(ReadFile(dir + "/cdn.tsv"));
  set.libs = ParseLibSignatures(ReadFile(dir + "/libs.tsv"));
  set.public_suffixes =
      PublicSuffixList::Parse(ReadFile(dir + "/public_suffix.dat"));
  return set;
}

int CompareVersions(std::string_view a, std::string_view b) {
  auto next = [](std::string_view& v) -> long {
    long value = 0;
    size_t i = 0;
    while (i < v.size() && v[i] >= '0' && v[i] <= '9')
      value = value * 10 + (v[i++] - '0');
    while (i < v.size() && v[i] != '.')
      ++i;
    v.remove_prefix(i < v.size() ? i + 1 : i);
    return value;
  };
  while (!a.empty() || !b.empty()) {
    long x = next(a);
    long y = next(b);
    if (x != y)
      return x < y ? -1 : 1;
  }
  return 0;
}

bool HostHasSuffix(std::string_view host, std::string_view suffix) {
  if (suffix.empty() || host.size() < suffix.size())
    return false;
  if (!host.ends_with(suffix))
    return false;
  return host.size() == suffix.size() ||
         host[host.size() - suffix.size() - 1] == '.';
}

}  // namespace sitebench
