// cli.hpp: Subcommand front end: gamma, classify, asymptote, qrf, embed-fit, bath

#pragma once

#include <iosfwd>

namespace dephasing::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kConfigError = 2,
    kDivergence = 3,
    kAccuracy = 4,
};

// Parses argv, runs one subcommand and returns its exit code. Data goes to `out`
// (or the configured output file), diagnostics and run metadata to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dephasing::cli
