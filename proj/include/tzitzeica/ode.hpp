#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "errors.hpp"

namespace tzitzeica {

template <std::size_t N>
using CVec = std::array<std::complex<double>, N>;

struct OdeOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    double max_step = 0.1;     // magnitude; sign follows the direction of integration
    double initial_step = 0.0; // 0 -> max_step / 10
    std::size_t max_steps = 50'000'000;
};

struct OdeStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

namespace detail {

template <std::size_t N>
inline void axpy(CVec<N>& out, const CVec<N>& y, double h,
                 std::initializer_list<std::pair<double, const CVec<N>*>> terms) {
    for (std::size_t i = 0; i < N; ++i) {
        std::complex<double> acc = 0;
        for (const auto& [c, k] : terms) acc += c * (*k)[i];
        out[i] = y[i] + h * acc;
    }
}

template <std::size_t N>
inline bool all_finite(const CVec<N>& v) {
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

} // namespace detail

// Dormand-Prince 5(4) with FSAL and a standard PI-free step controller.
// rhs(x, y, dydx). Integrates from x0 to x1 (either direction). `tag` is
// reported in IntegrationError (the spectral parameter for Jost solves).
template <std::size_t N, class Rhs>
CVec<N> integrate_dopri5(Rhs&& rhs, double x0, double x1, CVec<N> y, const OdeOptions& opt,
                         double tag = 0.0, OdeStats* stats = nullptr) {
    if (x0 == x1) return y;
    const double dir = x1 > x0 ? 1.0 : -1.0;
    const double span = std::abs(x1 - x0);
    const double hmax = std::min(opt.max_step, span);
    double h = opt.initial_step > 0 ? std::min(opt.initial_step, hmax) : hmax / 10.0;
    const double hmin = 1e-13 * std::max(1.0, span);

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    CVec<N> k1, k2, k3, k4, k5, k6, k7, tmp, ynew;
    double x = x0;
    rhs(x, y, k1);
    std::size_t n = 0;
    while (true) {
        double remaining = (x1 - x) * dir;
        if (remaining <= hmin) break;
        bool last = false;
        if (h >= remaining) {
            h = remaining;
            last = true;
        }
        const double hs = dir * h;
        detail::axpy<N>(tmp, y, hs, {{a21, &k1}});
        rhs(x + c2 * hs, tmp, k2);
        detail::axpy<N>(tmp, y, hs, {{a31, &k1}, {a32, &k2}});
        rhs(x + c3 * hs, tmp, k3);
        detail::axpy<N>(tmp, y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
        rhs(x + c4 * hs, tmp, k4);
        detail::axpy<N>(tmp, y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        rhs(x + c5 * hs, tmp, k5);
        detail::axpy<N>(tmp, y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
        rhs(x + hs, tmp, k6);
        detail::axpy<N>(ynew, y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        rhs(x + hs, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            std::complex<double> e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                           e6 * k6[i] + e7 * k7[i]);
            double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err = std::max(err, std::abs(e) / sc);
        }
        if (!std::isfinite(err) || !detail::all_finite<N>(ynew))
            throw IntegrationError("non-finite state in adaptive integrator at x = " +
                                       std::to_string(x),
                                   tag);
        if (err <= 1.0) {
            x = last ? x1 : x + hs;
            y = ynew;
            k1 = k7;
            if (stats) ++stats->accepted;
            if (last) break;
            double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h = std::min(h * fac, hmax);
        } else {
            if (stats) ++stats->rejected;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            if (h < hmin)
                throw IntegrationError("step-size underflow at x = " + std::to_string(x), tag);
        }
        if (++n > opt.max_steps) throw IntegrationError("step budget exhausted", tag);
    }
    return y;
}

// Classical fixed-step RK4 with n steps from x0 to x1.
template <std::size_t N, class Rhs>
CVec<N> integrate_rk4(Rhs&& rhs, double x0, double x1, CVec<N> y, std::size_t n) {
    if (n == 0) throw DomainError("integrate_rk4: need at least one step");
    const double h = (x1 - x0) / static_cast<double>(n);
    CVec<N> k1, k2, k3, k4, tmp;
    for (std::size_t s = 0; s < n; ++s) {
        const double x = x0 + static_cast<double>(s) * h;
        rhs(x, y, k1);
        detail::axpy<N>(tmp, y, h, {{0.5, &k1}});
        rhs(x + 0.5 * h, tmp, k2);
        detail::axpy<N>(tmp, y, h, {{0.5, &k2}});
        rhs(x + 0.5 * h, tmp, k3);
        detail::axpy<N>(tmp, y, h, {{1.0, &k3}});
        rhs(x + h, tmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return y;
}

} // namespace tzitzeica
