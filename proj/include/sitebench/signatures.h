#ifndef SITEBENCH_SIGNATURES_H_
#define SITEBENCH_SIGNATURES_H_

#include <regex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sitebench/public_suffix.h"

namespace sitebench {

class SignatureError : public std::runtime_error {
 public:
  explicit SignatureError(const std::string& what) : std::runtime_error(what) {}
};

struct FingerprintSignature {
  std::string id;
  std::string pattern;
  std::regex re;
};

// A CDN is recognized either by a host suffix (dot boundary) or, when the
// second column starts with "header:", by a regex over "name: value" response
// header lines with the name lowercased.
struct CdnSignature {
  std::string cdn;
  std::string host_suffix;
  std::string header_pattern;
  std::regex header_re;

  bool is_header() const { return !header_pattern.empty(); }
};

// The filename regex must capture the version in group 1.
struct LibSignature {
  std::string name;
  std::string latest;
  std::string filename_pattern;
  std::regex filename_re;
};

// Data tables driving content analysis, loaded from one directory:
// fingerprints.tsv, cdn.tsv, libs.tsv and public_suffix.dat.
struct SignatureSet {
  std::vector<FingerprintSignature> fingerprints;
  std::vector<CdnSignature> cdns;
  std::vector<LibSignature> libs;
  PublicSuffixList public_suffixes;

  // Throws SignatureError on unreadable files or malformed rows.
  static SignatureSet LoadDir(const std::string& dir);
};

std::vector<FingerprintSignature> ParseFingerprints(std::string_view text);
std::vector<CdnSignature> ParseCdnSignatures(std::string_view text);
std::vector<LibSignature> ParseLibSignatures(std::string_view text);

// Compares dotted numeric versions ("1.8.2" < "1.12.0"). Non-numeric
// suffixes within a component are ignored. Returns <0, 0 or >0.
int CompareVersions(std::string_view a, std::string_view b);

// True when |host| equals |suffix| or ends with "." + |suffix|.
bool HostHasSuffix(std::string_view host, std::string_view suffix);

}  // namespace sitebench

#endif  // SITEBENCH_SIGNATURES_H_
