#pragma once

// The biasaudit command line. Subcommands: weat, directbias, correlate,
// attrdiff, audit, counterexample. Exit codes: 0 success, 1 usage error,
// 2 data error, 3 numeric degeneracy.

#include <iosfwd>
#include <span>
#include <string>

namespace biasaudit::cli {

constexpr int kExitSuccess = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDegenerate = 3;

/// `args` excludes the program name. Reports go to `out`, diagnostics to `err`.
int runCli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace biasaudit::cli
