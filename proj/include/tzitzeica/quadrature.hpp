#pragma once

#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "errors.hpp"

namespace tzitzeica {

struct QuadResult {
    double value = 0;
    double error = 0;
    int evaluations = 0;
};

namespace detail {

inline constexpr std::array<double, 8> k15_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> k15_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> g7_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline void gk15(F& f, double a, double b, double& val, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * k15_w[7], g = fc * g7_w[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * k15_x[i];
        const double f1 = f(c - dx), f2 = f(c + dx);
        k += k15_w[i] * (f1 + f2);
        if (i % 2 == 1) g += g7_w[i / 2] * (f1 + f2);
    }
    val = k * h;
    err = std::abs((k - g) * h);
}

} // namespace detail

// Globally adaptive Gauss-Kronrod 7/15. Integrable endpoint singularities
// (log-type) are handled by repeated bisection.
template <class F>
QuadResult integrate_gk(F&& f, double a, double b, double abs_tol = 1e-12, double rel_tol = 1e-10,
                        int max_intervals = 2000) {
    QuadResult r;
    if (a == b) return r;
    struct Seg {
        double a, b, v, e;
        bool operator<(const Seg& o) const { return e < o.e; }
    };
    std::priority_queue<Seg> q;
    double v, e;
    detail::gk15(f, a, b, v, e);
    r.evaluations = 15;
    q.push({a, b, v, e});
    double total = v, err = e;
    int n = 1;
    while (err > std::max(abs_tol, rel_tol * std::abs(total)) && n < max_intervals) {
        Seg s = q.top();
        q.pop();
        const double m = 0.5 * (s.a + s.b);
        if (!(m > std::min(s.a, s.b) && m < std::max(s.a, s.b))) {
            q.push(s);
            break;
        }
        double v1, e1, v2, e2;
        detail::gk15(f, s.a, m, v1, e1);
        detail::gk15(f, m, s.b, v2, e2);
        r.evaluations += 30;
        total += v1 + v2 - s.v;
        err += e1 + e2 - s.e;
        q.push({s.a, m, v1, e1});
        q.push({m, s.b, v2, e2});
        ++n;
    }
    // resum to limit drift from the running updates
    total = 0;
    err = 0;
    while (!q.empty()) {
        total += q.top().v;
        err += q.top().e;
        q.pop();
    }
    if (!std::isfinite(total)) throw DomainError("integrate_gk: non-finite integral");
    r.value = total;
    r.error = err;
    return r;
}

} // namespace tzitzeica
