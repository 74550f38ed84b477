#ifndef SITEBENCH_CSV_H_
#define SITEBENCH_CSV_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sitebench/model.h"

namespace sitebench {

class CsvError : public std::runtime_error {
 public:
  explicit CsvError(const std::string& what) : std::runtime_error(what) {}
};

using CsvRow = std::vector<std::string>;

// RFC 4180 records: comma separated, double-quote quoting with "" escapes,
// CRLF or LF line ends. A leading UTF-8 BOM is dropped; blank lines are
// skipped. Throws CsvError on an unterminated quote or stray quote.
std::vector<CsvRow> ParseCsv(std::string_view text);

// Quotes fields containing comma, quote, CR or LF. Lines end with CRLF.
std::string WriteCsv(const std::vector<CsvRow>& rows);

struct SiteCsv {
  std::vector<std::string> property_schema;
  std::vector<Site> sites;
};

// Header must start with "url"; the other columns become the property
// schema. Empty cells become null properties. URLs are normalized. Throws
// CsvError on a bad header or row width and MalformedUrl on a bad URL.
SiteCsv ParseSiteCsv(std::string_view text);

}  // namespace sitebench

#endif  // SITEBENCH_CSV_H_
