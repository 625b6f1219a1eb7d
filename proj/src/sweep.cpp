#include "pdm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace pdm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Runs work(i) for i in [0, n) on up to `threads` workers. Results are written
/// by index, so the outcome does not depend on scheduling.
template <class Work>
void parallel_for(int n, unsigned threads, Work&& work) {
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) work(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                    try {
                        work(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

unsigned workers_for(const SweepConfig& cfg) {
    return cfg.threads > 0 ? cfg.threads : resolve_thread_count();
}

BifurcationPoint failed_point(double param, long long n_samples, const std::exception& e) {
    BifurcationPoint pt;
    pt.param = param;
    pt.samples.assign(static_cast<std::size_t>(n_samples), StroboSample{kNaN, kNaN, kNaN});
    pt.error = e.what();
    return pt;
}

}  // namespace

std::string to_string(Axis a) { return a == Axis::F ? "f" : "xi"; }

std::string to_string(IcMode m) { return m == IcMode::FixedIC ? "fixed" : "continuation"; }

void SweepConfig::validate() const {
    if (!(start < stop)) throw std::invalid_argument("sweep requires start < stop");
    if (steps < 2) throw std::invalid_argument("sweep requires steps >= 2");
    if (n_samples < 1 || n_transient < 0) {
        throw std::invalid_argument("sweep requires n_samples >= 1 and n_transient >= 0");
    }
    if (!initial.finite()) throw std::invalid_argument("sweep initial state must be finite");
    base.validate();
    params_at(0).validate();
    params_at(steps - 1).validate();
    integrator_config().validate();
}

double SweepConfig::value_at(int i) const {
    if (i == steps - 1) return stop;
    return start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

Params SweepConfig::params_at(int i) const {
    Params p = base;
    (axis == Axis::F ? p.f : p.xi) = value_at(i);
    p.validate();
    return p;
}

IntegratorConfig SweepConfig::integrator_config() const {
    return integrator.value_or(IntegratorConfig::defaults_for(base));
}

std::vector<BifurcationRow> BifurcationData::rows() const {
    std::vector<BifurcationRow> out;
    for (const auto& pt : points) {
        for (std::size_t k = 0; k < pt.samples.size(); ++k) {
            out.push_back({pt.param, static_cast<long long>(k), pt.samples[k].x, pt.samples[k].y,
                           pt.error.has_value()});
        }
    }
    return out;
}

unsigned resolve_thread_count() {
    if (const char* env = std::getenv("PDM_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1) {
            throw std::invalid_argument(std::string("PDM_THREADS must be a positive integer, got '") +
                                        env + "'");
        }
        return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

BifurcationData bifurcation_scan(const SweepConfig& cfg) {
    cfg.validate();
    const IntegratorConfig icfg = cfg.integrator_config();
    BifurcationData data;
    data.points.resize(static_cast<std::size_t>(cfg.steps));

    const auto run_point = [&](int i, const State& s0) -> State {
        const Params p = cfg.params_at(i);
        auto& out = data.points[static_cast<std::size_t>(i)];
        out.param = cfg.value_at(i);
        try {
            StroboSeries series = integrate_strobe(s0, p, cfg.n_transient, cfg.n_samples, icfg);
            out.samples = std::move(series.samples);
            if (cfg.classify_points) {
                ClassifyOptions opts;
                opts.n_transient = cfg.n_transient;
                opts.n_samples = cfg.n_samples;
                opts.integrator = icfg;
                out.classification = classify(p, s0, opts);
            }
            return series.final_state;
        } catch (const std::runtime_error& e) {
            out = failed_point(cfg.value_at(i), cfg.n_samples, e);
            return cfg.initial;
        }
    };

    if (cfg.ic_mode == IcMode::FixedIC) {
        parallel_for(cfg.steps, workers_for(cfg), [&](int i) { run_point(i, cfg.initial); });
    } else {
        State seed = cfg.initial;
        for (int i = 0; i < cfg.steps; ++i) {
            const State last = run_point(i, seed);
            seed = State{last.x, last.y, cfg.initial.z};
        }
    }
    return data;
}

std::vector<LyapunovRow> lyapunov_scan(const SweepConfig& cfg) {
    cfg.validate();
    const IntegratorConfig icfg = cfg.integrator_config();
    std::vector<LyapunovRow> rows(static_cast<std::size_t>(cfg.steps));

    const auto run_point = [&](int i, const State& s0) -> State {
        const Params p = cfg.params_at(i);
        const double T = p.drive_period();
        auto& row = rows[static_cast<std::size_t>(i)];
        row.param = cfg.value_at(i);
        try {
            const LyapunovResult r =
                lyapunov_max(s0, p, static_cast<double>(cfg.n_transient) * T,
                             cfg.lyapunov_average_periods * T, icfg);
            row.lambda_max = r.lambda_max;
            return r.final_state;
        } catch (const std::runtime_error& e) {
            row.lambda_max = kNaN;
            row.error = e.what();
            return cfg.initial;
        }
    };

    if (cfg.ic_mode == IcMode::FixedIC) {
        parallel_for(cfg.steps, workers_for(cfg), [&](int i) { run_point(i, cfg.initial); });
    } else {
        State seed = cfg.initial;
        for (int i = 0; i < cfg.steps; ++i) {
            const State last = run_point(i, seed);
            seed = State{last.x, last.y, cfg.initial.z};
        }
    }
    return rows;
}

}  // namespace pdm
