#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "pdm/analysis.hpp"

using namespace pdm;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

StroboSeries series_from(const std::vector<std::pair<double, double>>& xy) {
    StroboSeries s;
    for (const auto& [x, y] : xy) s.samples.push_back({x, y, 0.0});
    return s;
}

/// Cycle of `n` well separated points repeated over `len` samples, plus jitter.
StroboSeries cycle(int n, int len, std::mt19937_64& rng, double jitter) {
    std::uniform_real_distribution<double> base(-3, 3), noise(-jitter, jitter);
    std::vector<std::pair<double, double>> points;
    for (int i = 0; i < n; ++i) points.emplace_back(base(rng), base(rng));
    // keep distinct cycle points well apart
    for (int i = 0; i < n; ++i) points[i].first = 0.5 * i - 3.0;
    std::vector<std::pair<double, double>> xy;
    for (int k = 0; k < len; ++k) {
        const auto& p = points[k % n];
        xy.emplace_back(p.first + noise(rng), p.second + noise(rng));
    }
    return series_from(xy);
}

}  // namespace

TEST_CASE("detect_period examples", "[analysis]") {
    std::vector<std::pair<double, double>> constant(128, {1.3, -0.2});
    CHECK(detect_period(series_from(constant)) == 1);

    std::vector<std::pair<double, double>> alternating;
    for (int k = 0; k < 128; ++k) alternating.emplace_back(k % 2 ? 2.0 : -1.0, k % 2 ? 0.5 : 0.1);
    CHECK(detect_period(series_from(alternating)) == 2);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3, 3);
    std::vector<std::pair<double, double>> chaotic;
    for (int k = 0; k < 128; ++k) chaotic.emplace_back(u(rng), u(rng));
    CHECK_FALSE(detect_period(series_from(chaotic)).has_value());
}

TEST_CASE("detect_period needs enough samples", "[analysis]") {
    std::vector<std::pair<double, double>> shortish(31, {0.0, 0.0});
    CHECK_THROWS_AS(detect_period(series_from(shortish)), InsufficientDataError);
    std::vector<std::pair<double, double>> enough(32, {0.0, 0.0});
    CHECK(detect_period(series_from(enough)) == 1);
}

TEST_CASE("detect_period tolerance scales with amplitude", "[analysis]") {
    // amplitude 3 -> tolerance 1e-4 + 3e-3
    std::vector<std::pair<double, double>> xy;
    for (int k = 0; k < 128; ++k) xy.emplace_back(3.0 + (k % 2 ? 0.002 : 0.0), 0.0);
    CHECK(detect_period(series_from(xy)) == 1);
    xy.clear();
    for (int k = 0; k < 128; ++k) xy.emplace_back(3.0 + (k % 2 ? 0.004 : 0.0), 0.0);
    CHECK(detect_period(series_from(xy)) == 2);
}

TEST_CASE("detect_period finds the true cycle length", "[analysis][property]") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 12);
        const StroboSeries s = cycle(n, 128, rng, 1e-5);
        CHECK(detect_period(s) == n);
    }
}

TEST_CASE("period minimality and divisibility", "[analysis][property]") {
    // noisy cycles with jitter up to the tolerance, so acceptance is decided at the edge
    std::mt19937_64 rng(5);
    int accepted = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 8);
        const StroboSeries s = cycle(n, 128, rng, 1.6e-3);
        const auto found = detect_period(s);
        if (!found) continue;
        ++accepted;
        for (int m = 1; m < *found; ++m) CHECK_FALSE(accepts_period(s, m));
        if (2 * *found <= 16) CHECK(accepts_period(s, 2 * *found));
    }
    CHECK(accepted > 20);
}

TEST_CASE("exact ML solution", "[analysis]") {
    const Params constant = Params::make(0.0, 0.25, 0.0, 0.0, 0.0, 1.0);
    for (double t : {0.0, 0.7, 3.1, 10.0}) {
        const auto [x, y] = ml_exact_solution(1.0, t, constant);
        CHECK(x == Approx(std::sin(0.5 * t)));
        CHECK(y == Approx(0.5 * std::cos(0.5 * t)));
    }
    const Params ml = Params::make(1.0, 0.25, 0.0, 0.0, 0.0, 1.0);
    const auto [x0, y0] = ml_exact_solution(1.0, 0.0, ml);
    CHECK(x0 == 0.0);
    CHECK(y0 == Approx(0.3535533906).epsilon(1e-10));
}

TEST_CASE("exact ML solution satisfies the undriven equation", "[analysis][property]") {
    // (1 + xi x^2) x'' - xi x x'^2 + w0^2 x = 0 with x'' = -W^2 x
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ts(0, 100), amps(0.1, 3), xis(0, 3);
    for (int i = 0; i < 100; ++i) {
        const Params p = Params::make(xis(rng), 0.25, 0.0, 0.0, 0.0, 1.0);
        const double a = amps(rng), t = ts(rng);
        const auto [x, y] = ml_exact_solution(a, t, p);
        const double w = ml_frequency(a, p);
        const double xdd = -w * w * x;
        const double r = (1 + p.xi * x * x) * xdd - p.xi * x * y * y + p.omega0_sq * x;
        CHECK(std::abs(r) < 1e-12);
    }
}

TEST_CASE("integrator tracks the exact ML solution over 10 periods", "[analysis]") {
    for (double xi : {0.0, 0.5, 1.0, 3.0}) {
        const Params p = Params::make(xi, 0.25, 0.0, 0.0, 0.0, 1.0);
        const double a = 1.0, w = ml_frequency(a, p);
        const auto [x0, y0] = ml_exact_solution(a, 0.0, p);
        const Trajectory traj = integrate_adaptive({x0, y0, 0}, 0, 10 * 2 * kPi / w, p,
                                                   IntegratorConfig::with_tolerance(p, 1e-10),
                                                   ml_vector_field);
        double worst = 0.0;
        for (const auto& s : traj.samples) {
            const auto [xe, ye] = ml_exact_solution(a, s.t, p);
            worst = std::max({worst, std::abs(s.state.x - xe), std::abs(s.state.y - ye)});
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("lyapunov exponent of the damped linear oscillator", "[analysis]") {
    const Params p = Params::make(0.0, 0.25, 0.0, 0.2, 0.0, 1.0);
    const double T = p.drive_period();
    const LyapunovResult r = lyapunov_max({0.1, 0.1, 0}, p, 200 * T, 2000 * T,
                                          IntegratorConfig::defaults_for(p));
    CHECK(r.lambda_max == Approx(-0.1).margin(0.005));
    CHECK(r.n_renorms == 2000);
    CHECK(r.duration == Approx(2000 * T));
    CHECK_THROWS_AS(lyapunov_max({0.1, 0.1, 0}, p, 0, 50 * T, IntegratorConfig{}),
                    std::invalid_argument);
}

TEST_CASE("lyapunov sign at limit cycle and chaos", "[analysis]") {
    const auto lam = [](double f, double xi, std::optional<double> renorm = std::nullopt) {
        const Params p = Params::with(f, xi);
        const double T = p.drive_period();
        return lyapunov_max({0.1, 0.1, 0}, p, 200 * T, 2000 * T, IntegratorConfig::defaults_for(p),
                            renorm)
            .lambda_max;
    };
    const double periodic = lam(5.0, 0.0);
    const double chaotic = lam(8.0, 0.0);
    CHECK(periodic < 0.0);
    CHECK(chaotic > 0.0);

    // renormalizing twice per period leaves the estimate in place
    const double T = 2 * kPi;
    CHECK(std::abs(lam(5.0, 0.0, T / 2) - periodic) < 0.005);
    CHECK(std::abs(lam(8.0, 0.0, T / 2) - chaotic) < 0.005);
    const Params lin = Params::make(0.0, 0.25, 0.0, 0.2, 0.0, 1.0);
    const auto cfg = IntegratorConfig::defaults_for(lin);
    const double a = lyapunov_max({0.1, 0.1, 0}, lin, 200 * T, 2000 * T, cfg).lambda_max;
    const double b = lyapunov_max({0.1, 0.1, 0}, lin, 200 * T, 2000 * T, cfg, T / 2).lambda_max;
    CHECK(std::abs(a - b) < 0.005);
}

TEST_CASE("evidence combination", "[analysis][property]") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> lams(-0.3, 0.3);
    for (int i = 0; i < 500; ++i) {
        const double l = lams(rng);
        const std::optional<int> period =
            rng() % 2 ? std::optional<int>(1 + static_cast<int>(rng() % 16)) : std::nullopt;
        const Classification c = combine_evidence(period, l, 0.01);
        CHECK(c.lambda_max == l);
        CHECK(c.detected_period == period);
        switch (c.label) {
            case Label::Periodic:
                CHECK(period.has_value());
                CHECK(l < 0.0);
                break;
            case Label::Chaotic:
                CHECK_FALSE(period.has_value());
                CHECK(l > 0.01);
                break;
            case Label::Unresolved:
                CHECK(((period && l >= 0.0) || (!period && l <= 0.01)));
                break;
        }
    }
    CHECK(combine_evidence(4, -0.2, 0.01).to_string() == "Periodic(4)");
    CHECK(combine_evidence(std::nullopt, 0.2, 0.01).to_string() == "Chaotic");
    CHECK(combine_evidence(std::nullopt, 0.005, 0.01).to_string() == "Unresolved");
    CHECK(combine_evidence(2, 0.05, 0.01).to_string() == "Unresolved");
}

TEST_CASE("classify the constant-mass limit cycle", "[analysis]") {
    const Classification c = classify(Params::with(5.0, 0.0), {0.1, 0.1, 0});
    CHECK(c.to_string() == "Periodic(1)");
    CHECK(c.lambda_max < 0.0);
}

TEST_CASE("classify a chaotic point", "[analysis]") {
    const Classification c = classify(Params::with(5.0, 0.6), {0.1, 0.1, 0});
    CHECK(c.label == Label::Chaotic);
    CHECK(c.lambda_max > 0.01);
}
