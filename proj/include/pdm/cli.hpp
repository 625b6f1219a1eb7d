// Command-line front end: simulate, phase, bifurcation, lyapunov, classify, verify.
#pragma once

#include <iosfwd>

namespace pdm::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kNumerical = 2,
    kVerification = 3,
};

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pdm::cli
