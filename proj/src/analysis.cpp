#include "pdm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pdm {

namespace {

void require_length(const StroboSeries& series, const PeriodOptions& opts) {
    if (opts.n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (series.samples.size() < 2 * static_cast<std::size_t>(opts.n_max)) {
        throw InsufficientDataError("period detection needs at least " +
                                    std::to_string(2 * opts.n_max) + " samples, got " +
                                    std::to_string(series.samples.size()));
    }
}

bool accepts_unchecked(const StroboSeries& series, int n, const PeriodOptions& opts) {
    const auto& s = series.samples;
    const auto len = static_cast<long long>(s.size());
    double amplitude = 0.0;
    for (const auto& v : s) amplitude = std::max({amplitude, std::abs(v.x), std::abs(v.y)});
    const double tol = opts.tol_abs + opts.tol_rel * amplitude;
    // The region covers the window plus n_max predecessors; it does not depend on n,
    // so the classes for 2n refine the classes for n.
    const long long window = std::min<long long>(opts.window, len - opts.n_max);
    const long long first = len - window - opts.n_max;
    for (int r = 0; r < n; ++r) {
        double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
        for (long long k = first + r; k < len; k += n) {
            xlo = std::min(xlo, s[k].x);
            xhi = std::max(xhi, s[k].x);
            ylo = std::min(ylo, s[k].y);
            yhi = std::max(yhi, s[k].y);
        }
        if (xhi - xlo > tol || yhi - ylo > tol) return false;
    }
    return true;
}

}  // namespace

bool accepts_period(const StroboSeries& series, int n, const PeriodOptions& opts) {
    require_length(series, opts);
    if (n < 1 || n > opts.n_max) throw std::invalid_argument("candidate period out of range");
    return accepts_unchecked(series, n, opts);
}

std::optional<int> detect_period(const StroboSeries& series, const PeriodOptions& opts) {
    require_length(series, opts);
    for (int n = 1; n <= opts.n_max; ++n) {
        if (accepts_unchecked(series, n, opts)) return n;
    }
    return std::nullopt;
}

LyapunovResult lyapunov_max(const State& s0, const Params& p, double t_transient,
                            double t_average, const IntegratorConfig& cfg,
                            std::optional<double> renorm_interval) {
    const double period = p.drive_period();
    if (t_average < 100.0 * period * (1.0 - 1e-12)) {
        throw std::invalid_argument("lyapunov_max needs t_average >= 100 drive periods");
    }
    if (t_transient < 0.0) throw std::invalid_argument("t_transient must be >= 0");
    const double interval = renorm_interval.value_or(period);
    const State start = propagate(s0, t_transient, p, cfg);
    const TangentRun run = integrate_with_tangent(start, {1.0, 0.0}, p, t_average, interval, cfg);
    LyapunovResult r;
    r.n_renorms = static_cast<long long>(run.log_growth.size());
    r.duration = static_cast<double>(r.n_renorms) * interval;
    const double sum = std::accumulate(run.log_growth.begin(), run.log_growth.end(), 0.0);
    r.lambda_max = sum / r.duration;
    r.final_state = run.final_state;
    return r;
}

std::string Classification::to_string() const {
    switch (label) {
        case Label::Periodic: return "Periodic(" + std::to_string(detected_period.value_or(0)) + ")";
        case Label::Chaotic: return "Chaotic";
        case Label::Unresolved: break;
    }
    return "Unresolved";
}

Classification combine_evidence(std::optional<int> period, double lambda_max,
                                double chaos_threshold) {
    Classification c;
    c.lambda_max = lambda_max;
    c.detected_period = period;
    if (period && lambda_max < 0.0) {
        c.label = Label::Periodic;
    } else if (!period && lambda_max > chaos_threshold) {
        c.label = Label::Chaotic;
    } else {
        c.label = Label::Unresolved;
    }
    return c;
}

Classification classify(const Params& p, const State& s0, const ClassifyOptions& opts) {
    p.validate();
    const IntegratorConfig cfg = opts.integrator.value_or(IntegratorConfig::defaults_for(p));
    const StroboSeries series = integrate_strobe(s0, p, opts.n_transient, opts.n_samples, cfg);
    const auto period = detect_period(series, opts.period);
    const double T = p.drive_period();
    const LyapunovResult ly = lyapunov_max(s0, p, opts.lyapunov_transient_periods * T,
                                           opts.lyapunov_average_periods * T, cfg);
    return combine_evidence(period, ly.lambda_max, opts.chaos_threshold);
}

double ml_frequency(double amplitude, const Params& p) {
    return std::sqrt(p.omega0_sq / (1.0 + p.xi * amplitude * amplitude));
}

std::pair<double, double> ml_exact_solution(double amplitude, double t, const Params& p) {
    const double w = ml_frequency(amplitude, p);
    return {amplitude * std::sin(w * t), amplitude * w * std::cos(w * t)};
}

}  // namespace pdm
