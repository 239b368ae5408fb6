#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "csv.hpp"
#include "errors.hpp"

namespace tzitzeica {

struct PdeConfig {
    double dx = 0.02;
    double cfl = 0.9;
    double dt = 0.0;            // 0 -> cfl * dx
    double t_max = 50.0;
    double L = 0.0;             // half-width; 0 -> t_max + support_radius + margin
    double support_radius = 12.0;
    double margin = 5.0;
    double blowup_guard = 50.0;

    double time_step() const { return dt > 0 ? dt : cfl * dx; }
    double half_width() const { return L > 0 ? L : t_max + support_radius + margin; }
};

// V(u) = e^u + e^{-2u}/2 - 3/2, so u_tt - u_xx = -V'(u)
inline double potential(double u) { return std::expm1(u) + 0.5 * std::expm1(-2.0 * u); }
inline double potential_d1(double u) { return std::exp(u) - std::exp(-2.0 * u); }
inline double potential_d2(double u) { return std::exp(u) + 2.0 * std::exp(-2.0 * u); }
inline double forcing(double u) { return -potential_d1(u); }

struct FieldState {
    std::vector<double> x;
    std::vector<double> u;      // level n
    std::vector<double> u_prev; // level n-1
    double t0 = 0;
    std::size_t n = 0;          // steps taken since t0
    double dx = 0;
    double dt = 0;
    double blowup_guard = 50;
    double energy0 = 0;

    double t() const { return t0 + static_cast<double>(n) * dt; }
    std::size_t size() const { return u.size(); }
};

struct EnergyReport {
    double t = 0;
    double energy = 0;       // modified (shadow) energy conserved by leapfrog to O(dt^4)
    double energy_plain = 0; // sum dx [ut^2/2 + ux^2/2 + V(u)]
    double drift_rel = 0;    // |E(t) - E(0)| / max(|E(0)|, eps), modified energy
};

namespace detail {

inline void laplacian(const std::vector<double>& u, double dx, std::vector<double>& out) {
    const std::size_t n = u.size();
    out.assign(n, 0.0);
    const double s = 1.0 / (dx * dx);
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * s;
}

inline void leapfrog(const std::vector<double>& u, const std::vector<double>& up, double dx, double dt,
                     std::vector<double>& out) {
    const std::size_t n = u.size();
    out.resize(n);
    const double r = dt * dt / (dx * dx), d2 = dt * dt;
    out[0] = 0.0;
    out[n - 1] = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i)
        out[i] = 2.0 * u[i] - up[i] + r * (u[i + 1] - 2.0 * u[i] + u[i - 1]) + d2 * forcing(u[i]);
}

inline EnergyReport energy_terms(const FieldState& s) {
    std::vector<double> next;
    leapfrog(s.u, s.u_prev, s.dx, s.dt, next);
    const std::size_t n = s.size();
    const double dx = s.dx, dt = s.dt;
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = (next[i] - s.u_prev[i]) / (2.0 * dt);
    double kin = 0, pot = 0, grad = 0, gg = 0, pp = 0;
    for (std::size_t i = 0; i < n; ++i) {
        kin += 0.5 * p[i] * p[i];
        pot += potential(s.u[i]);
        pp += potential_d2(s.u[i]) * p[i] * p[i];
        if (i + 1 < n) {
            const double du = (s.u[i + 1] - s.u[i]) / dx;
            const double dp = (p[i + 1] - p[i]) / dx;
            grad += 0.5 * du * du;
            pp += dp * dp;
        }
        if (i > 0 && i + 1 < n) {
            // g = -D_xx u + V'(u), zero on the Dirichlet boundary
            const double g = -(s.u[i + 1] - 2.0 * s.u[i] + s.u[i - 1]) / (dx * dx) + potential_d1(s.u[i]);
            gg += g * g;
        }
    }
    EnergyReport r;
    r.t = s.t();
    r.energy_plain = dx * (kin + pot + grad);
    r.energy = r.energy_plain + dt * dt * dx * (-gg / 24.0 + pp / 12.0);
    return r;
}

} // namespace detail

inline EnergyReport energy(const FieldState& s) {
    auto r = detail::energy_terms(s);
    const double ref = std::max(std::abs(s.energy0), std::numeric_limits<double>::min());
    r.drift_rel = s.energy0 == 0.0 && r.energy == 0.0 ? 0.0 : std::abs(r.energy - s.energy0) / ref;
    return r;
}

inline FieldState init_state(const PdeConfig& cfg, const std::function<double(double)>& u0_fn,
                             const std::function<double(double)>& u1_fn) {
    if (!(cfg.dx > 0)) throw StabilityError("pde: dx must be positive");
    if (!(cfg.cfl > 0 && cfg.cfl <= 1.0)) throw StabilityError("pde: CFL violation, cfl must lie in (0, 1]");
    const double dt = cfg.time_step();
    if (!(dt > 0) || dt > cfg.cfl * cfg.dx * (1.0 + 1e-12))
        throw StabilityError("pde: CFL violation, dt = " + format_number(dt) + " exceeds cfl * dx = " +
                             format_number(cfg.cfl * cfg.dx));
    const double need = cfg.t_max + cfg.support_radius + cfg.margin;
    double L = cfg.half_width();
    if (L < need * (1.0 - 1e-12))
        throw StabilityError("pde: domain too small, L = " + format_number(L) + " < t_max + support + margin = " +
                             format_number(need));
    const auto cells = static_cast<std::size_t>(std::ceil(2.0 * L / cfg.dx - 1e-9));
    L = 0.5 * static_cast<double>(cells) * cfg.dx;
    const std::size_t n = cells + 1;

    FieldState s;
    s.dx = cfg.dx;
    s.dt = dt;
    s.blowup_guard = cfg.blowup_guard;
    s.x.resize(n);
    s.u.resize(n);
    std::vector<double> u1(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.x[i] = -L + static_cast<double>(i) * cfg.dx;
        s.u[i] = u0_fn(s.x[i]);
        u1[i] = u1_fn(s.x[i]);
    }
    s.u.front() = s.u.back() = 0.0;
    u1.front() = u1.back() = 0.0;
    // second-order Taylor start for u(-dt)
    std::vector<double> lap;
    detail::laplacian(s.u, cfg.dx, lap);
    s.u_prev.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        s.u_prev[i] = s.u[i] - dt * u1[i] + 0.5 * dt * dt * (lap[i] + forcing(s.u[i]));
    s.u_prev.front() = s.u_prev.back() = 0.0;
    s.energy0 = detail::energy_terms(s).energy;
    return s;
}

inline void step(FieldState& s) {
    std::vector<double> next;
    detail::leapfrog(s.u, s.u_prev, s.dx, s.dt, next);
    double worst = 0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < next.size(); ++i) {
        const double a = std::abs(next[i]);
        if (!(a <= worst)) {
            worst = a;
            at = i;
            if (!std::isfinite(a)) break;
        }
    }
    if (!std::isfinite(worst) || worst > s.blowup_guard)
        throw StabilityError("pde: blowup at t = " + format_number(s.t() + s.dt) + ", x = " +
                             format_number(s.x[at]) + ", |u| = " + format_number(worst));
    s.u_prev.swap(s.u);
    s.u.swap(next);
    ++s.n;
}

// swap time levels so that further steps run backwards in time
inline void reverse_time(FieldState& s) {
    s.u.swap(s.u_prev);
    s.t0 = s.t() - s.dt;
    s.dt = -s.dt;
    s.n = 0;
}

// u_t at level n by the centered difference (u^{n+1} - u^{n-1}) / 2dt
inline std::vector<double> time_derivative(const FieldState& s) {
    std::vector<double> next;
    detail::leapfrog(s.u, s.u_prev, s.dx, s.dt, next);
    std::vector<double> ut(s.size());
    for (std::size_t i = 0; i < ut.size(); ++i) ut[i] = (next[i] - s.u_prev[i]) / (2.0 * s.dt);
    return ut;
}

struct Snapshot {
    double t_requested = 0;
    double t = 0; // exact grid time
    std::vector<double> x, u, ut;
};

inline Snapshot take_snapshot(const FieldState& s, double t_requested) {
    return {t_requested, s.t(), s.x, s.u, time_derivative(s)};
}

inline std::size_t steps_to(const FieldState& s, double t) {
    const double k = std::round((t - s.t()) / s.dt);
    if (k < 0) throw DomainError("pde: requested time " + format_number(t) + " precedes the state");
    return static_cast<std::size_t>(k);
}

struct RunResult {
    std::vector<Snapshot> snapshots; // sorted by time
};

// Steps to the grid time nearest t_target, recording snapshots at the
// grid times nearest each requested time.
inline RunResult run_until(FieldState& s, double t_target, std::vector<double> snapshot_times = {}) {
    if (!(s.dt > 0)) throw DomainError("run_until: state runs backwards in time");
    if (t_target < s.t() - 0.5 * s.dt) throw DomainError("run_until: t_target precedes the current time");
    std::sort(snapshot_times.begin(), snapshot_times.end());
    for (double ts : snapshot_times)
        if (ts > t_target + 0.5 * s.dt || ts < s.t() - 0.5 * s.dt)
            throw DomainError("run_until: snapshot time " + format_number(ts) + " outside [t, t_target]");
    const std::size_t total = steps_to(s, t_target);
    std::vector<std::size_t> marks;
    for (double ts : snapshot_times) marks.push_back(steps_to(s, ts));
    RunResult res;
    std::size_t k = 0, mi = 0;
    while (true) {
        while (mi < marks.size() && marks[mi] == k) res.snapshots.push_back(take_snapshot(s, snapshot_times[mi++]));
        if (k == total) break;
        step(s);
        ++k;
    }
    return res;
}

inline void write_snapshot_csv(std::ostream& os, const Snapshot& snap) {
    CsvWriter w(os, {"x", "u", "ut"});
    for (std::size_t i = 0; i < snap.x.size(); ++i) w.row(snap.x[i], snap.u[i], snap.ut[i]);
}

struct ConvergenceStudy {
    std::vector<double> dx;        // coarse to fine, each halving the previous
    std::vector<double> diff_norm; // max |u_h - u_{h/2}| on the coarse grid, one per consecutive pair
    double rate = 0;               // log2 of the ratio of consecutive differences
};

// Self-convergence in dx and dt together: dt = T / n with n doubling, so
// every level lands exactly on T. Needs three levels.
inline ConvergenceStudy self_convergence(const std::function<double(double)>& u0,
                                         const std::function<double(double)>& u1, double T, double L,
                                         double dx0, double cfl = 0.9, int levels = 3) {
    if (levels < 3) throw DomainError("self_convergence: need at least 3 levels");
    ConvergenceStudy st;
    std::vector<std::vector<double>> fields;
    const auto n0 = static_cast<std::size_t>(std::ceil(T / (cfl * dx0)));
    for (int k = 0; k < levels; ++k) {
        const double dx = dx0 / std::pow(2.0, k);
        const std::size_t n = n0 << k;
        PdeConfig cfg;
        cfg.dx = dx;
        cfg.cfl = cfl;
        cfg.dt = T / static_cast<double>(n);
        cfg.t_max = 0;
        cfg.support_radius = 0;
        cfg.margin = 0;
        cfg.L = L;
        auto s = init_state(cfg, u0, u1);
        for (std::size_t i = 0; i < n; ++i) step(s);
        st.dx.push_back(dx);
        fields.push_back(s.u);
    }
    for (int k = 0; k + 1 < levels; ++k) {
        const auto& c = fields[k];
        const auto& f = fields[k + 1];
        double m = 0;
        for (std::size_t i = 0; i < c.size(); ++i) m = std::max(m, std::abs(c[i] - f[2 * i]));
        st.diff_norm.push_back(m);
    }
    st.rate = std::log2(st.diff_norm[st.diff_norm.size() - 2] / st.diff_norm.back());
    return st;
}

inline std::string snapshot_filename(double t) { return "field_t" + format_number(t) + ".csv"; }

} // namespace tzitzeica
