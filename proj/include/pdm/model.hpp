// Position-dependent-mass driven Duffing oscillator: physical model.
//
// Mass profile m(x) = 1/sqrt(1 + xi x^2), equation of motion
//   m(x) x'' + m'(x) x'^2 + w0^2 x + lambda x^3 + alpha x' = f cos(omega t)
// written as the first-order system (x, y = x', z = omega t).
#pragma once

#include <array>
#include <stdexcept>

namespace pdm {

/// Thrown when an evaluation or integration produces a non-finite state.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Physical parameters. Build through `Params::make` (or the defaults) so the
/// invariants xi >= 0, omega > 0 and finiteness are checked.
struct Params {
    double xi = 0.0;
    double omega0_sq = 0.25;
    double lambda = 1.0;
    double alpha = 0.2;
    double f = 0.0;
    double omega = 1.0;

    /// Validating constructor; throws std::invalid_argument.
    static Params make(double xi, double omega0_sq, double lambda, double alpha,
                       double f, double omega);

    /// Default parameter set with the given forcing amplitude and PDM index.
    static Params with(double f, double xi);

    /// Throws std::invalid_argument if an invariant is broken.
    void validate() const;

    double drive_period() const;

    bool operator==(const Params&) const = default;
};

struct State {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool finite() const;
    bool operator==(const State&) const = default;
};

struct EnergyBreakdown {
    double kinetic = 0.0;
    double potential = 0.0;
    double total = 0.0;
    double momentum = 0.0;
};

/// d(x', y')/d(x, y) at fixed drive phase. Row-major: {{dxdx, dxdy}, {dydx, dydy}}.
struct Jacobian2 {
    std::array<std::array<double, 2>, 2> a{};

    double operator()(int r, int c) const { return a[r][c]; }
};

double mass(double x, const Params& p);
double mass_prime(double x, const Params& p);

/// Quartic potential V(x) = w0^2 x^2 / 2 + lambda x^4 / 4.
double potential(double x, const Params& p);

/// Right-hand side (x', y', z'). Throws DivergenceError on non-finite output.
State vector_field(const State& s, const Params& p);

/// Field of the undriven PDM oscillator (1 + xi x^2) x'' - xi x x'^2 + w0^2 x = 0, whose
/// orbits are known in closed form. Only xi, omega0_sq and omega are used. This is
/// not the f = lambda = alpha = 0 limit of vector_field, whose restoring term
/// carries an extra factor (1 + xi x^2)^(3/2).
State ml_vector_field(const State& s, const Params& p);

/// Signature shared by vector_field and ml_vector_field.
using FieldFn = State (*)(const State&, const Params&);

Jacobian2 jacobian_xy(const State& s, const Params& p);

EnergyBreakdown energy(const State& s, const Params& p);

/// Power of the reacting thrust, -m'(x) y^3 / 2.
double thrust_power(const State& s, const Params& p);

/// dE/dt along exact solutions: thrust power minus damping plus drive work.
double power_balance_rhs(const State& s, const Params& p);

}  // namespace pdm
