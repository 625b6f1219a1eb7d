// Built-in oracle checks run by `pdm verify`. Each check compares the
// implementation against an independent route: a closed-form solution, finite
// differences, an integrated power balance or a linear eigenvalue.
#pragma once

#include <string>
#include <vector>

namespace pdm {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;      // measured error or estimate
    double threshold = 0.0;  // bound the value was held to
    std::string detail;
};

/// Largest |x - A sin(W t)| over 10 periods of the undriven PDM oscillator (xi=1, A=1).
CheckResult check_exact_solution();
/// Worst relative Frobenius error of jacobian_xy against central differences, 100 states.
CheckResult check_jacobian();
/// Energy drift minus integrated thrust power on an undriven, undamped run.
CheckResult check_thrust_power();
/// Relative power-balance residual over 100 drive periods of the full system.
CheckResult check_power_balance();
/// |lambda_max + 0.1| for the damped linear oscillator.
CheckResult check_linear_lyapunov();

std::vector<CheckResult> run_verification();

}  // namespace pdm
