#ifndef SITEBENCH_LEAK_PROBE_H_
#define SITEBENCH_LEAK_PROBE_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "sitebench/facts.h"
#include "sitebench/http_fetch.h"

namespace sitebench {

inline constexpr std::array<std::string_view, 7> kLeakPaths = {
    "/server-status/", "/server-info/", "/test.php", "/phpinfo.php",
    "/.git/HEAD",      "/.svn/entries", "/core"};

inline constexpr size_t kLeakBodyCap = 64 * 1024;

// The content signature that proves |body| at |path| is a leak, if any.
std::optional<std::string> DetectLeakSignature(std::string_view path,
                                               std::string_view body);

// One GET per leak path against the origin of |base_url|, redirects not
// followed, bodies capped at kLeakBodyCap.
LeakFacts ProbeLeaks(std::string_view base_url,
                     const HttpFetcher& fetcher,
                     Millis timeout);

}  // namespace sitebench

#endif  // SITEBENCH_LEAK_PROBE_H_
