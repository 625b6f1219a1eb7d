// Time integration of the oscillator: classical RK4, adaptive Dormand-Prince
// 5(4), stroboscopic sampling and tangent (variational) propagation.
#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "pdm/model.hpp"

namespace pdm {

class StepBudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateTangentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-9;
    double h_init = 1e-3;
    double h_max = 2.0 * std::numbers::pi / 20.0;
    long long max_steps = 100'000'000;

    /// Defaults, with h_max resolving the drive period of `p` by 20 steps.
    static IntegratorConfig defaults_for(const Params& p);
    static IntegratorConfig with_tolerance(const Params& p, double tol);

    void validate() const;
};

struct TrajectorySample {
    double t;
    State state;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    long long steps = 0;
    long long rejected = 0;

    const TrajectorySample& back() const { return samples.back(); }
};

/// One sample of the stroboscopic map. `z` is kept so callers can check the
/// phase the sample was taken at.
struct StroboSample {
    double x;
    double y;
    double z;
};

struct StroboSeries {
    Params params;
    std::vector<StroboSample> samples;
    long long n_transient = 0;
    /// State at the last recorded sample, usable to continue the orbit.
    State final_state;
};

struct TangentRun {
    State final_state;
    std::array<double, 2> tangent{};
    /// ln|v| accumulated over each renormalization interval.
    std::vector<double> log_growth;
    long long steps = 0;
};

/// Result of integrating the state together with the work integral of
/// `power_balance_rhs`.
struct EnergyAudit {
    State initial;
    State final;
    double energy_initial = 0.0;
    double energy_final = 0.0;
    double work = 0.0;

    /// |E(t1) - E(t0) - work|
    double residual() const;
};

State rk4_step(const State& s, double t, double h, const Params& p, FieldFn field = vector_field);

/// Fixed-step RK4 from t0 to t1 with nominal step h; the last step is
/// shortened to land on t1.
State integrate_rk4(const State& s0, double t0, double t1, double h, const Params& p,
                    FieldFn field = vector_field);

Trajectory integrate_adaptive(const State& s0, double t0, double t1, const Params& p,
                              const IntegratorConfig& cfg, FieldFn field = vector_field);

/// Same as integrate_adaptive but keeps only the end state.
State propagate(const State& s0, double duration, const Params& p, const IntegratorConfig& cfg,
                FieldFn field = vector_field);

StroboSeries integrate_strobe(const State& s0, const Params& p, long long n_transient,
                              long long n_samples, const IntegratorConfig& cfg);

/// Samples the orbit at t_skip + k*dt for k = 0..n-1, landing on each time exactly.
Trajectory sample_uniform(const State& s0, const Params& p, double t_skip, double dt,
                          long long n, const IntegratorConfig& cfg);

TangentRun integrate_with_tangent(const State& s0, std::array<double, 2> v0, const Params& p,
                                  double duration, double renorm_interval,
                                  const IntegratorConfig& cfg);

EnergyAudit integrate_energy_audit(const State& s0, double duration, const Params& p,
                                   const IntegratorConfig& cfg);

}  // namespace pdm
