#include "pdm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "pdm/analysis.hpp"
#include "pdm/integrate.hpp"
#include "pdm/model.hpp"

namespace pdm {

namespace {

CheckResult make(std::string name, double value, double threshold, std::string detail = {}) {
    return CheckResult{std::move(name), value < threshold, value, threshold, std::move(detail)};
}

}  // namespace

CheckResult check_exact_solution() {
    const Params p = Params::make(1.0, 0.25, 0.0, 0.0, 0.0, 1.0);
    const double amplitude = 1.0;
    const double w = ml_frequency(amplitude, p);
    const auto [x0, y0] = ml_exact_solution(amplitude, 0.0, p);
    const Trajectory traj = integrate_adaptive(State{x0, y0, 0.0}, 0.0,
                                               10.0 * 2.0 * std::numbers::pi / w, p,
                                               IntegratorConfig::with_tolerance(p, 1e-10),
                                               ml_vector_field);
    double worst = 0.0;
    for (const auto& s : traj.samples) {
        const auto [xe, ye] = ml_exact_solution(amplitude, s.t, p);
        worst = std::max(worst, std::abs(s.state.x - xe));
    }
    return make("exact ML solution, 10 periods", worst, 1e-6);
}

CheckResult check_jacobian() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> coord(-3.0, 3.0), phase(0.0, 2.0 * std::numbers::pi),
        index(0.0, 2.0);
    constexpr double h = 1e-6;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Params p = Params::with(5.0, index(rng));
        const State s{coord(rng), coord(rng), phase(rng)};
        const Jacobian2 j = jacobian_xy(s, p);
        const auto dx = [&](double dxv, double dyv) {
            return vector_field(State{s.x + dxv, s.y + dyv, s.z}, p);
        };
        const State px = dx(h, 0), mx = dx(-h, 0), py = dx(0, h), my = dx(0, -h);
        const double fd[2][2] = {{(px.x - mx.x) / (2 * h), (py.x - my.x) / (2 * h)},
                                 {(px.y - mx.y) / (2 * h), (py.y - my.y) / (2 * h)}};
        double diff = 0.0, norm = 0.0;
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                diff += std::pow(j(r, c) - fd[r][c], 2);
                norm += std::pow(j(r, c), 2);
            }
        }
        worst = std::max(worst, std::sqrt(diff / norm));
    }
    return make("jacobian vs finite differences", worst, 1e-5);
}

CheckResult check_thrust_power() {
    const Params p = Params::make(1.0, 0.25, 1.0, 0.0, 0.0, 1.0);
    const EnergyAudit a = integrate_energy_audit(State{1.0, 0.5, 0.0}, 20.0 * p.drive_period(), p,
                                                 IntegratorConfig::with_tolerance(p, 1e-10));
    return make("energy drift = integrated thrust power", a.residual(), 1e-6);
}

CheckResult check_power_balance() {
    const Params p = Params::with(5.0, 0.5);
    const EnergyAudit a = integrate_energy_audit(State{0.1, 0.1, 0.0}, 100.0 * p.drive_period(), p,
                                                 IntegratorConfig::with_tolerance(p, 1e-10));
    const double scale = std::max({1.0, std::abs(a.energy_initial), std::abs(a.energy_final)});
    return make("driven power balance, 100 periods", a.residual() / scale, 1e-5);
}

CheckResult check_linear_lyapunov() {
    const Params p = Params::make(0.0, 0.25, 0.0, 0.2, 0.0, 1.0);
    const double T = p.drive_period();
    const LyapunovResult r = lyapunov_max(State{0.1, 0.1, 0.0}, p, 200.0 * T, 2000.0 * T,
                                          IntegratorConfig::defaults_for(p));
    return make("linear Lyapunov exponent = -0.1", std::abs(r.lambda_max + 0.1), 0.005,
                "lambda_max = " + std::to_string(r.lambda_max));
}

std::vector<CheckResult> run_verification() {
    return {check_exact_solution(), check_jacobian(), check_thrust_power(), check_power_balance(),
            check_linear_lyapunov()};
}

}  // namespace pdm
