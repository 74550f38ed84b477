#include "sitebench/blacklist.h"

#include <fstream>
#include <sstream>

#include "sitebench/json_codec.h"
#include "sitebench/url.h"

namespace sitebench {

namespace {

std::string CleanNote(std::string_view note) {
  std::string out(TrimWhitespace(note));
  for (char& c : out) {
    if (c == '\t' || c == '\n' || c == '\r')
      c = ' ';
  }
  return out;
}

bool HostCovered(std::string_view host, std::string_view pattern) {
  if (host == pattern)
    return true;
  return host.size() > pattern.size() &&
         host.substr(host.size() - pattern.size()) == pattern &&
         host[host.size() - pattern.size() - 1] == '.';
}

}  // namespace

Blacklist::Blacklist(std::filesystem::path path) : path_(std::move(path)) {
  std::lock_guard lock(mu_);
  LoadLocked();
}

std::string Blacklist::NormalizePattern(std::string_view pattern) {
  std::string_view p = TrimWhitespace(pattern);
  if (p.empty())
    throw BlacklistError("empty blacklist pattern");
  if (p.find("://") != std::string_view::npos) {
    try {
      return NormalizeUrl(p);
    } catch (const MalformedUrl& e) {
      throw BlacklistError(e.what());
    }
  }
  std::string host = ToLowerAscii(p);
  while (!host.empty() && host.back() == '.')
    host.pop_back();
  if (host.empty() || host.find_first_of("/?# \t") != std::string::npos)
    throw BlacklistError("malformed blacklist host '" + std::string(p) + "'");
  return host;
}

std::vector<BlacklistEntry> Blacklist::Parse(std::string_view text) {
  std::vector<BlacklistEntry> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = TrimWhitespace(raw);
    if (line.empty() || line.front() == '#')
      continue;
    std::vector<std::string_view> fields;
    std::string_view rest = raw;
    for (int i = 0; i < 2; ++i) {
      auto tab = rest.find('\t');
      if (tab == std::string_view::npos)
        break;
      fields.push_back(rest.substr(0, tab));
      rest.remove_prefix(tab + 1);
    }
    fields.push_back(rest);
    BlacklistEntry e;
    std::string where = "blacklist line " + std::to_string(line_no) + ": ";
    e.pattern = NormalizePattern(fields[0]);
    if (fields.size() >= 2) {
      auto when = ParseTimestamp(TrimWhitespace(fields[1]));
      if (!when)
        throw BlacklistError(where + "bad timestamp");
      e.added_at = *when;
    }
    if (fields.size() == 3)
      e.note = CleanNote(fields[2]);
    out.push_back(std::move(e));
  }
  return out;
}

std::string Blacklist::Serialize(const std::vector<BlacklistEntry>& entries) {
  std::string out = "# pattern\tadded_at\tnote\n";
  for (const BlacklistEntry& e : entries)
    out +=
        e.pattern + "\t" + FormatTimestamp(e.added_at) + "\t" + e.note + "\n";
  return out;
}

void Blacklist::LoadLocked() {
  std::error_code ec;
  if (!std::filesystem::exists(path_, ec)) {
    entries_.clear();
    return;
  }
  loaded_mtime_ = std::filesystem::last_write_time(path_, ec);
  std::ifstream in(path_);
  if (!in)
    throw BlacklistError("cannot read blacklist " + path_.string());
  std::stringstream buf;
  buf << in.rdbuf();
  entries_ = Parse(buf.str());
}

void Blacklist::SaveLocked() const {
  if (path_.empty())
    return;
  std::filesystem::path tmp = path_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << Serialize(entries_);
    if (!out.flush())
      throw BlacklistError("cannot write blacklist " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path_, ec);
  if (ec)
    throw BlacklistError("cannot replace blacklist " + path_.string() + ": " +
                         ec.message());
}

bool Blacklist::Add(std::string_view pattern,
                    std::string_view note,
                    TimePoint added_at) {
  std::string normalized = NormalizePattern(pattern);
  std::lock_guard lock(mu_);
  for (const BlacklistEntry& e : entries_) {
    if (e.pattern == normalized)
      return false;
  }
  entries_.push_back({normalized, CleanNote(note), added_at});
  SaveLocked();
  std::error_code ec;
  if (!path_.empty())
    loaded_mtime_ = std::filesystem::last_write_time(path_, ec);
  return true;
}

std::optional<BlacklistEntry> Blacklist::Match(std::string_view url) const {
  std::string normalized_url;
  std::string host;
  if (url.find("://") != std::string_view::npos) {
    auto parts = ParseUrl(url);
    if (!parts)
      return std::nullopt;
    normalized_url = parts->Serialize();
    host = parts->host;
  } else {
    host = NormalizePattern(url);
  }
  std::lock_guard lock(mu_);
  for (const BlacklistEntry& e : entries_) {
    if (e.is_url_prefix()) {
      if (!normalized_url.empty() && normalized_url.rfind(e.pattern, 0) == 0)
        return e;
    } else if (HostCovered(host, e.pattern)) {
      return e;
    }
  }
  return std::nullopt;
}

std::vector<BlacklistEntry> Blacklist::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

void Blacklist::Refresh() {
  if (path_.empty())
    return;
  std::lock_guard lock(mu_);
  std::error_code ec;
  auto mtime = std::filesystem::last_write_time(path_, ec);
  if (ec || mtime != loaded_mtime_)
    LoadLocked();
}

}  // namespace sitebench
