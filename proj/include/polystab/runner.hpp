#ifndef POLYSTAB_RUNNER_HPP
#define POLYSTAB_RUNNER_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace polystab {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 2 configuration, 3 numerical, 4 classification.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitClassification = 4;

/// Full CLI entry point (subcommands run/sweep/tables/n0); returns the exit
/// code. Output-root override: POLYSTAB_OUT_ROOT.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace polystab

#endif
