#pragma once

#include <iosfwd>

namespace sphere_poisson {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 1;
inline constexpr int kExitNumericFailure = 2;

// Subcommands: simulate, density, condition, df, parity. Tables go to `out`
// (or to files for simulate), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sphere_poisson
