#include "pdm/integrate.hpp"

#include <cmath>
#include <string>

#include "pdm/dopri.hpp"

namespace pdm {

namespace {

using detail::Vec;

/// Anchors the drive phase to elapsed time so z never drifts from z0 + omega (t - t0).
struct PhaseClock {
    double z0;
    double t0;
    double omega;

    double at(double t) const { return z0 + omega * (t - t0); }
};

struct Stepper {
    const IntegratorConfig& cfg;
    double h;  // proposed size of the next step; clamping for landing does not shrink it
    long long steps = 0;
    long long rejected = 0;

    void charge() {
        if (++steps + rejected > cfg.max_steps) {
            throw StepBudgetError("integration step budget of " + std::to_string(cfg.max_steps) +
                                  " exhausted");
        }
    }

    /// Advances y from t to exactly t_end, calling on_accept(t, y) after each step.
    template <std::size_t N, class Rhs, class OnAccept>
    void advance(Vec<N>& y, double& t, double t_end, const PhaseClock& clock, Rhs&& rhs,
                 OnAccept&& on_accept) {
        while (t < t_end) {
            const double remaining = t_end - t;
            const bool landing = h >= remaining;
            const double h_try = landing ? remaining : h;
            const auto trial = detail::dopri_trial<N>(y, h_try, rhs, cfg.rel_tol, cfg.abs_tol);
            if (!std::isfinite(trial.err_norm)) {
                throw DivergenceError("non-finite error estimate during integration");
            }
            const double factor = detail::step_factor(trial.err_norm);
            if (trial.err_norm <= 1.0) {
                charge();
                y = trial.y;
                t = landing ? t_end : t + h_try;
                y[2] = clock.at(t);
                // a short landing step keeps the previous proposal
                h = std::min(cfg.h_max, landing ? std::max(h, h_try * factor) : h_try * factor);
                on_accept(t, y);
            } else {
                ++rejected;
                if (steps + rejected > cfg.max_steps) {
                    throw StepBudgetError("integration step budget exhausted");
                }
                h = h_try * std::min(1.0, factor);
                if (h <= 1e-15 * std::max(1.0, std::abs(t))) {
                    throw DivergenceError("step size underflow at t = " + std::to_string(t));
                }
            }
        }
    }
};

Vec<3> to_vec(const State& s) { return {s.x, s.y, s.z}; }

template <std::size_t N>
State head(const Vec<N>& v) {
    return State{v[0], v[1], v[2]};
}

auto state_rhs(const Params& p, FieldFn field = vector_field) {
    return [&p, field](const Vec<3>& v) {
        const State d = field(State{v[0], v[1], v[2]}, p);
        return Vec<3>{d.x, d.y, d.z};
    };
}

void require_finite(const State& s) {
    if (!s.finite()) throw std::invalid_argument("initial state must be finite");
}

}  // namespace

IntegratorConfig IntegratorConfig::defaults_for(const Params& p) {
    IntegratorConfig c;
    c.h_max = p.drive_period() / 20.0;
    return c;
}

IntegratorConfig IntegratorConfig::with_tolerance(const Params& p, double tol) {
    IntegratorConfig c = defaults_for(p);
    c.rel_tol = tol;
    c.abs_tol = tol;
    return c;
}

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("tolerances must be > 0");
    if (!(h_init > 0.0) || !(h_max > 0.0)) throw std::invalid_argument("step sizes must be > 0");
    if (h_init > h_max) throw std::invalid_argument("h_init must not exceed h_max");
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
}

double EnergyAudit::residual() const {
    return std::abs(energy_final - energy_initial - work);
}

State rk4_step(const State& s, double /*t*/, double h, const Params& p, FieldFn field) {
    if (h < 0.0) throw std::invalid_argument("rk4_step requires h >= 0");
    require_finite(s);
    if (h == 0.0) return s;
    const auto axpy = [](const State& a, double c, const State& k) {
        return State{a.x + c * k.x, a.y + c * k.y, a.z + c * k.z};
    };
    const State k1 = field(s, p);
    const State k2 = field(axpy(s, 0.5 * h, k1), p);
    const State k3 = field(axpy(s, 0.5 * h, k2), p);
    const State k4 = field(axpy(s, h, k3), p);
    const double w = h / 6.0;
    State out{s.x + w * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
              s.y + w * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
              s.z + w * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z)};
    if (!out.finite()) throw DivergenceError("RK4 step produced a non-finite state");
    return out;
}

State integrate_rk4(const State& s0, double t0, double t1, double h, const Params& p,
                    FieldFn field) {
    if (!(h > 0.0)) throw std::invalid_argument("integrate_rk4 requires h > 0");
    if (t1 < t0) throw std::invalid_argument("integrate_rk4 requires t1 >= t0");
    const auto n = static_cast<long long>(std::ceil((t1 - t0) / h - 1e-9));
    State s = s0;
    double t = t0;
    for (long long i = 0; i < n; ++i) {
        const double t_next = (i + 1 == n) ? t1 : t0 + static_cast<double>(i + 1) * h;
        s = rk4_step(s, t, t_next - t, p, field);
        t = t_next;
    }
    return s;
}

Trajectory integrate_adaptive(const State& s0, double t0, double t1, const Params& p,
                              const IntegratorConfig& cfg, FieldFn field) {
    if (t1 < t0) throw std::invalid_argument("integrate_adaptive requires t1 >= t0");
    require_finite(s0);
    cfg.validate();
    Trajectory traj;
    traj.samples.push_back({t0, s0});
    Stepper stepper{cfg, cfg.h_init};
    Vec<3> y = to_vec(s0);
    double t = t0;
    const PhaseClock clock{s0.z, t0, p.omega};
    stepper.advance(y, t, t1, clock, state_rhs(p, field),
                    [&](double ta, const Vec<3>& ya) { traj.samples.push_back({ta, head(ya)}); });
    traj.steps = stepper.steps;
    traj.rejected = stepper.rejected;
    return traj;
}

State propagate(const State& s0, double duration, const Params& p, const IntegratorConfig& cfg,
                FieldFn field) {
    if (duration < 0.0) throw std::invalid_argument("propagate requires duration >= 0");
    require_finite(s0);
    cfg.validate();
    Stepper stepper{cfg, cfg.h_init};
    Vec<3> y = to_vec(s0);
    double t = 0.0;
    stepper.advance(y, t, duration, PhaseClock{s0.z, 0.0, p.omega}, state_rhs(p, field),
                    [](double, const Vec<3>&) {});
    return head(y);
}

StroboSeries integrate_strobe(const State& s0, const Params& p, long long n_transient,
                              long long n_samples, const IntegratorConfig& cfg) {
    if (n_samples < 1) throw std::invalid_argument("integrate_strobe requires n_samples >= 1");
    if (n_transient < 0) throw std::invalid_argument("n_transient must be >= 0");
    require_finite(s0);
    cfg.validate();
    const double period = p.drive_period();
    StroboSeries out;
    out.params = p;
    out.n_transient = n_transient;
    out.samples.reserve(static_cast<std::size_t>(n_samples));
    Stepper stepper{cfg, cfg.h_init};
    Vec<3> y = to_vec(s0);
    double t = 0.0;
    const PhaseClock clock{s0.z, 0.0, p.omega};
    const auto rhs = state_rhs(p);
    const auto ignore = [](double, const Vec<3>&) {};
    // Land on every period boundary so step sequences do not depend on n_transient.
    for (long long k = 1; k <= n_transient; ++k) {
        stepper.advance(y, t, static_cast<double>(k) * period, clock, rhs, ignore);
    }
    for (long long k = 0; k < n_samples; ++k) {
        stepper.advance(y, t, static_cast<double>(n_transient + k) * period, clock, rhs, ignore);
        out.samples.push_back({y[0], y[1], y[2]});
    }
    out.final_state = head(y);
    return out;
}

Trajectory sample_uniform(const State& s0, const Params& p, double t_skip, double dt,
                          long long n, const IntegratorConfig& cfg) {
    if (t_skip < 0.0 || !(dt > 0.0) || n < 0) {
        throw std::invalid_argument("sample_uniform requires t_skip >= 0, dt > 0, n >= 0");
    }
    require_finite(s0);
    cfg.validate();
    Trajectory traj;
    traj.samples.reserve(static_cast<std::size_t>(n));
    Stepper stepper{cfg, cfg.h_init};
    Vec<3> y = to_vec(s0);
    double t = 0.0;
    const PhaseClock clock{s0.z, 0.0, p.omega};
    const auto rhs = state_rhs(p);
    const auto ignore = [](double, const Vec<3>&) {};
    for (long long k = 0; k < n; ++k) {
        const double target = t_skip + static_cast<double>(k) * dt;
        stepper.advance(y, t, target, clock, rhs, ignore);
        traj.samples.push_back({target, head(y)});
    }
    traj.steps = stepper.steps;
    traj.rejected = stepper.rejected;
    return traj;
}

TangentRun integrate_with_tangent(const State& s0, std::array<double, 2> v0, const Params& p,
                                  double duration, double renorm_interval,
                                  const IntegratorConfig& cfg) {
    if (!(renorm_interval > 0.0)) throw std::invalid_argument("renorm_interval must be > 0");
    if (duration < 0.0) throw std::invalid_argument("duration must be >= 0");
    const double n0 = std::hypot(v0[0], v0[1]);
    if (!(n0 > 0.0) || !std::isfinite(n0)) {
        throw std::invalid_argument("initial tangent must be finite and non-zero");
    }
    require_finite(s0);
    cfg.validate();

    const auto rhs = [&p](const Vec<5>& v) {
        const State s{v[0], v[1], v[2]};
        const State d = vector_field(s, p);
        const Jacobian2 j = jacobian_xy(s, p);
        return Vec<5>{d.x, d.y, d.z, j(0, 0) * v[3] + j(0, 1) * v[4],
                      j(1, 0) * v[3] + j(1, 1) * v[4]};
    };

    TangentRun run;
    Stepper stepper{cfg, cfg.h_init};
    Vec<5> y{s0.x, s0.y, s0.z, v0[0], v0[1]};
    double t = 0.0;
    const PhaseClock clock{s0.z, 0.0, p.omega};
    const auto ignore = [](double, const Vec<5>&) {};
    const auto n_records = static_cast<long long>(std::floor(duration / renorm_interval + 1e-9));
    run.log_growth.reserve(static_cast<std::size_t>(n_records));
    for (long long k = 1; k <= n_records; ++k) {
        stepper.advance(y, t, static_cast<double>(k) * renorm_interval, clock, rhs, ignore);
        const double norm = std::hypot(y[3], y[4]);
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            throw DegenerateTangentError("tangent vector collapsed at t = " + std::to_string(t));
        }
        run.log_growth.push_back(std::log(norm));
        y[3] /= norm;
        y[4] /= norm;
    }
    stepper.advance(y, t, duration, clock, rhs, ignore);
    run.final_state = State{y[0], y[1], y[2]};
    run.tangent = {y[3], y[4]};
    run.steps = stepper.steps;
    return run;
}

EnergyAudit integrate_energy_audit(const State& s0, double duration, const Params& p,
                                   const IntegratorConfig& cfg) {
    if (duration < 0.0) throw std::invalid_argument("duration must be >= 0");
    require_finite(s0);
    cfg.validate();
    const auto rhs = [&p](const Vec<4>& v) {
        const State s{v[0], v[1], v[2]};
        const State d = vector_field(s, p);
        return Vec<4>{d.x, d.y, d.z, power_balance_rhs(s, p)};
    };
    Stepper stepper{cfg, cfg.h_init};
    Vec<4> y{s0.x, s0.y, s0.z, 0.0};
    double t = 0.0;
    stepper.advance(y, t, duration, PhaseClock{s0.z, 0.0, p.omega}, rhs,
                    [](double, const Vec<4>&) {});
    EnergyAudit audit;
    audit.initial = s0;
    audit.final = State{y[0], y[1], y[2]};
    audit.energy_initial = energy(s0, p).total;
    audit.energy_final = energy(audit.final, p).total;
    audit.work = y[3];
    return audit;
}

}  // namespace pdm
