#ifndef SITEBENCH_TOOLS_CLI_H_
#define SITEBENCH_TOOLS_CLI_H_

#include <iosfwd>

namespace sitebench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUnreachable = 2;
// The site is on the opt-out list; nothing was sent to it.
inline constexpr int kExitOptedOut = 3;

// Entry point of the sitebench command line tool.
int RunCli(int argc,
           const char* const* argv,
           std::ostream& out,
           std::ostream& err);

}  // namespace sitebench

#endif  // SITEBENCH_TOOLS_CLI_H_
