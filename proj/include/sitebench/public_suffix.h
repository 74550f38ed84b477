#ifndef SITEBENCH_PUBLIC_SUFFIX_H_
#define SITEBENCH_PUBLIC_SUFFIX_H_

#include <string>
#include <string_view>
#include <unordered_set>

namespace sitebench {

// Public-suffix snapshot in the publicsuffix.org rule syntax: one suffix per
// line, optional "*." wildcards and "!" exceptions, "//" comments.
class PublicSuffixList {
 public:
  static PublicSuffixList Parse(std::string_view text);
  // Throws std::runtime_error when the file cannot be read.
  static PublicSuffixList LoadFile(const std::string& path);

  // The public suffix of |host| (the TLD when no rule matches).
  std::string PublicSuffix(std::string_view host) const;

  // Public suffix plus one label. IP literals and hosts that are themselves
  // a public suffix map to themselves.
  std::string RegistrableDomain(std::string_view host) const;

  bool SameRegistrableDomain(std::string_view a, std::string_view b) const {
    return RegistrableDomain(a) == RegistrableDomain(b);
  }

  size_t size() const {
    return rules_.size() + wildcards_.size() + exceptions_.size();
  }

 private:
  std::unordered_set<std::string> rules_;
  std::unordered_set<std::string> wildcards_;   // "*.ck" stored as "ck"
  std::unordered_set<std::string> exceptions_;  // "!www.ck" stored as "www.ck"
};

}  // namespace sitebench

#endif  // SITEBENCH_PUBLIC_SUFFIX_H_
