// Dormand-Prince 5(4) embedded Runge-Kutta stepper over fixed-size systems.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace pdm::detail {

template <std::size_t N>
using Vec = std::array<double, N>;

struct DopriCoefficients {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    // 5th-order weights (also row 7 of the tableau)
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b5th - b4th
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

template <std::size_t N>
struct DopriTrial {
    Vec<N> y;
    double err_norm;
};

/// One trial step of size h. `rhs(y)` returns dy/dt (autonomous systems only).
/// err_norm is the max over components of |err_i| / (atol + rtol max(|y_i|, |y_new_i|)).
template <std::size_t N, class Rhs>
DopriTrial<N> dopri_trial(const Vec<N>& y, double h, Rhs&& rhs, double rtol, double atol) {
    using C = DopriCoefficients;
    Vec<N> tmp;
    const auto stage = [&](auto&& combine) {
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * combine(i);
        return rhs(tmp);
    };
    const Vec<N> k1 = rhs(y);
    const Vec<N> k2 = stage([&](std::size_t i) { return C::a21 * k1[i]; });
    const Vec<N> k3 = stage([&](std::size_t i) { return C::a31 * k1[i] + C::a32 * k2[i]; });
    const Vec<N> k4 = stage(
        [&](std::size_t i) { return C::a41 * k1[i] + C::a42 * k2[i] + C::a43 * k3[i]; });
    const Vec<N> k5 = stage([&](std::size_t i) {
        return C::a51 * k1[i] + C::a52 * k2[i] + C::a53 * k3[i] + C::a54 * k4[i];
    });
    const Vec<N> k6 = stage([&](std::size_t i) {
        return C::a61 * k1[i] + C::a62 * k2[i] + C::a63 * k3[i] + C::a64 * k4[i] +
               C::a65 * k5[i];
    });
    DopriTrial<N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out.y[i] = y[i] + h * (C::b1 * k1[i] + C::b3 * k3[i] + C::b4 * k4[i] + C::b5 * k5[i] +
                               C::b6 * k6[i]);
    }
    const Vec<N> k7 = rhs(out.y);
    double norm = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double err = h * (C::e1 * k1[i] + C::e3 * k3[i] + C::e4 * k4[i] +
                                C::e5 * k5[i] + C::e6 * k6[i] + C::e7 * k7[i]);
        const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(out.y[i]));
        norm = std::max(norm, std::abs(err) / scale);
    }
    out.err_norm = norm;
    return out;
}

/// Step-size factor of the standard controller: 0.9 err^(-1/5), clamped to [0.2, 5].
inline double step_factor(double err_norm) {
    if (err_norm == 0.0) return 5.0;
    return std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
}

}  // namespace pdm::detail
