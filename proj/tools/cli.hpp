#ifndef TRSP_TOOLS_CLI_HPP
#define TRSP_TOOLS_CLI_HPP

#include <ostream>

namespace trsp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

// Runs one `trsp` command. Machine-readable results go to files, human
// summaries to `out`, diagnostics to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trsp::cli

#endif  // TRSP_TOOLS_CLI_HPP
