// Dynamical verdicts from trajectories: stroboscopic period detection, the
// largest Lyapunov exponent (Benettin renormalization), attractor labels and
// the exact periodic solution of the undriven PDM oscillator.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "pdm/integrate.hpp"
#include "pdm/model.hpp"

namespace pdm {

class InsufficientDataError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct PeriodOptions {
    int n_max = 16;
    double tol_abs = 1e-4;
    double tol_rel = 1e-3;
    /// Number of trailing samples compared. Shrinks to len - n_max on short series.
    int window = 64;
};

/// Smallest n <= n_max such that, inside the comparison window, samples whose
/// indices agree modulo n lie within tol_abs + tol_rel * A of each other in
/// both x and y (A = largest |x| or |y| in the series). Throws
/// InsufficientDataError when the series holds fewer than 2 n_max samples.
std::optional<int> detect_period(const StroboSeries& series, const PeriodOptions& opts = {});

/// The acceptance test detect_period applies to a single candidate period n.
bool accepts_period(const StroboSeries& series, int n, const PeriodOptions& opts = {});

struct LyapunovResult {
    double lambda_max = 0.0;
    long long n_renorms = 0;
    double duration = 0.0;
    State final_state;
};

/// Largest Lyapunov exponent. The tangent is renormalized every
/// `renorm_interval` (one drive period when omitted) after discarding
/// `t_transient`. Requires t_average >= 100 drive periods.
LyapunovResult lyapunov_max(const State& s0, const Params& p, double t_transient,
                            double t_average, const IntegratorConfig& cfg,
                            std::optional<double> renorm_interval = std::nullopt);

enum class Label { Periodic, Chaotic, Unresolved };

struct Classification {
    Label label = Label::Unresolved;
    double lambda_max = 0.0;
    std::optional<int> detected_period;

    /// "Periodic(n)", "Chaotic" or "Unresolved".
    std::string to_string() const;
};

struct ClassifyOptions {
    long long n_transient = 200;
    long long n_samples = 128;
    PeriodOptions period;
    double lyapunov_transient_periods = 200.0;
    double lyapunov_average_periods = 2000.0;
    double chaos_threshold = 0.01;
    std::optional<IntegratorConfig> integrator;  // defaults_for(p) when empty
};

/// Combines the two pieces of evidence into a label; contradictory evidence
/// yields Unresolved.
Classification combine_evidence(std::optional<int> period, double lambda_max,
                                double chaos_threshold);

Classification classify(const Params& p, const State& s0, const ClassifyOptions& opts = {});

/// x(t) = A sin(W t), W = w0 / sqrt(1 + xi A^2): the periodic solution of the
/// undriven, undamped, purely harmonic PDM oscillator. Returns (x, x').
std::pair<double, double> ml_exact_solution(double amplitude, double t, const Params& p);

/// Angular frequency W of ml_exact_solution.
double ml_frequency(double amplitude, const Params& p);

}  // namespace pdm
