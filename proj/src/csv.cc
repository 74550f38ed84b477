#include "sitebench/csv.h"

#include <set>

#include "sitebench/url.h"

namespace sitebench {

std::vector<CsvRow> ParseCsv(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF")
    text.remove_prefix(3);
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  int line = 1;
  auto end_row = [&] {
    if (field_started || !row.empty() || !field.empty()) {
      row.push_back(std::move(field));
      rows.push_back(std::move(row));
    }
    row.clear();
    field.clear();
    field_started = false;
  };
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
          if (i + 1 < text.size() && text[i + 1] != ',' &&
              text[i + 1] != '\n' && text[i + 1] != '\r')
            throw CsvError("line " + std::to_string(line) +
                           ": text after closing quote");
        }
      } else {
        if (c == '\n')
          ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty())
          throw CsvError("line " + std::to_string(line) +
                         ": quote inside unquoted field");
        quoted = true;
        field_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n')
          ++i;
        end_row();
        ++line;
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field += c;
    }
  }
  if (quoted)
    throw CsvError("unterminated quoted field");
  end_row();
  return rows;
}

std::string WriteCsv(const std::vector<CsvRow>& rows) {
  std::string out;
  for (const CsvRow& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i)
        out += ',';
      const std::string& f = row[i];
      if (f.find_first_of(",\"\r\n") == std::string::npos) {
        out += f;
        continue;
      }
      out += '"';
      for (char c : f) {
        if (c == '"')
          out += '"';
        out += c;
      }
      out += '"';
    }
    out += "\r\n";
  }
  return out;
}

SiteCsv ParseSiteCsv(std::string_view text) {
  std::vector<CsvRow> rows = ParseCsv(text);
  if (rows.empty())
    throw CsvError("CSV has no header");
  const CsvRow& header = rows.front();
  if (ToLowerAscii(TrimWhitespace(header.front())) != "url")
    throw CsvError("first CSV column must be 'url'");
  SiteCsv out;
  std::set<std::string> names;
  for (size_t i = 1; i < header.size(); ++i) {
    std::string name(TrimWhitespace(header[i]));
    if (name.empty())
      throw CsvError("empty property name in column " + std::to_string(i + 1));
    if (!names.insert(name).second)
      throw CsvError("duplicate property '" + name + "'");
    out.property_schema.push_back(name);
  }
  for (size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.size() != header.size())
      throw CsvError("row " + std::to_string(r + 1) + " has " +
                     std::to_string(row.size()) + " fields, expected " +
                     std::to_string(header.size()));
    Site site;
    site.url = NormalizeUrl(row.front());
    for (size_t i = 1; i < row.size(); ++i) {
      const std::string& name = out.property_schema[i - 1];
      if (row[i].empty())
        site.properties[name] = std::nullopt;
      else
        site.properties[name] = row[i];
    }
    out.sites.push_back(std::move(site));
  }
  return out;
}

}  // namespace sitebench
