#include "pdm/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pdm {

Params Params::make(double xi, double omega0_sq, double lambda, double alpha,
                    double f, double omega) {
    Params p{xi, omega0_sq, lambda, alpha, f, omega};
    p.validate();
    return p;
}

Params Params::with(double f, double xi) {
    Params p;
    p.f = f;
    p.xi = xi;
    p.validate();
    return p;
}

void Params::validate() const {
    for (double v : {xi, omega0_sq, lambda, alpha, f, omega}) {
        if (!std::isfinite(v)) throw std::invalid_argument("parameters must be finite");
    }
    if (xi < 0.0) {
        throw std::invalid_argument("PDM index xi must be >= 0, got " + std::to_string(xi));
    }
    if (omega <= 0.0) {
        throw std::invalid_argument("drive frequency omega must be > 0, got " +
                                    std::to_string(omega));
    }
}

double Params::drive_period() const { return 2.0 * std::numbers::pi / omega; }

bool State::finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

double mass(double x, const Params& p) { return 1.0 / std::sqrt(1.0 + p.xi * x * x); }

double mass_prime(double x, const Params& p) {
    const double q = 1.0 + p.xi * x * x;
    return -p.xi * x / (q * std::sqrt(q));
}

double potential(double x, const Params& p) {
    const double x2 = x * x;
    return 0.5 * p.omega0_sq * x2 + 0.25 * p.lambda * x2 * x2;
}

State vector_field(const State& s, const Params& p) {
    const double q = 1.0 + p.xi * s.x * s.x;
    const double force = p.f * std::cos(s.z) - p.omega0_sq * s.x -
                         p.lambda * s.x * s.x * s.x - p.alpha * s.y;
    const double ydot = p.xi * s.x * s.y * s.y / q + std::sqrt(q) * force;
    State d{s.y, ydot, p.omega};
    if (!d.finite()) throw DivergenceError("vector field evaluated to a non-finite value");
    return d;
}

State ml_vector_field(const State& s, const Params& p) {
    const double q = 1.0 + p.xi * s.x * s.x;
    State d{s.y, (p.xi * s.x * s.y * s.y - p.omega0_sq * s.x) / q, p.omega};
    if (!d.finite()) throw DivergenceError("vector field evaluated to a non-finite value");
    return d;
}

Jacobian2 jacobian_xy(const State& s, const Params& p) {
    const double x = s.x, y = s.y;
    const double q = 1.0 + p.xi * x * x;
    const double sq = std::sqrt(q);
    const double force = p.f * std::cos(s.z) - p.omega0_sq * x - p.lambda * x * x * x -
                         p.alpha * y;
    // d/dx [xi x y^2 / q] = xi y^2 (1 - xi x^2) / q^2
    // d/dx [sqrt(q) F]    = xi x F / sqrt(q) + sqrt(q) (-w0^2 - 3 lambda x^2)
    const double dydx = p.xi * y * y * (1.0 - p.xi * x * x) / (q * q) +
                        p.xi * x * force / sq +
                        sq * (-p.omega0_sq - 3.0 * p.lambda * x * x);
    const double dydy = 2.0 * p.xi * x * y / q - sq * p.alpha;
    return Jacobian2{{{{0.0, 1.0}, {dydx, dydy}}}};
}

EnergyBreakdown energy(const State& s, const Params& p) {
    const double m = mass(s.x, p);
    EnergyBreakdown e;
    e.kinetic = 0.5 * m * s.y * s.y;
    e.potential = potential(s.x, p);
    e.total = e.kinetic + e.potential;
    e.momentum = m * s.y;
    return e;
}

double thrust_power(const State& s, const Params& p) {
    return -0.5 * mass_prime(s.x, p) * s.y * s.y * s.y;
}

double power_balance_rhs(const State& s, const Params& p) {
    return thrust_power(s, p) - p.alpha * s.y * s.y + p.f * s.y * std::cos(s.z);
}

}  // namespace pdm
