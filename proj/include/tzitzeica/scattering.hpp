#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "csv.hpp"
#include "cubic_spline.hpp"
#include "errors.hpp"
#include "initial_data.hpp"
#include "matrix3.hpp"
#include "ode.hpp"
#include "parallel.hpp"
#include "spectral_core.hpp"

namespace tzitzeica {

enum class JostIntegrator { dopri5, rk4_fixed };

struct ScatteringOptions {
    JostIntegrator integrator = JostIntegrator::dopri5; // rk4_fixed: cross-check only
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    double X = 0.0;            // truncation half-width; 0 -> data.auto_truncation()
    double step_scale = 0.1;   // max step = step_scale / max(1, |lambda|, 1/|lambda|)
    double soliton_tol = 1e-3;
};

inline double truncation_for(const InitialData& data, const ScatteringOptions& opt) {
    const double X = opt.X > 0 ? opt.X : data.auto_truncation();
    if (X > -data.x_min() + 1e-12 || X > data.x_max() + 1e-12)
        throw DomainError("truncation X exceeds the sampled grid");
    return X;
}

inline double max_step_for(double lambda, const ScatteringOptions& opt) {
    const double a = std::abs(lambda);
    return opt.step_scale / std::max({1.0, a, 1.0 / a});
}

// Result of one stable sweep at real lambda.
//   lambda > 0: block = s(lambda) (2x2 leading), companion33 = sA_33(lambda)
//   lambda < 0: block = sA(lambda),               companion33 = s_33(lambda)
// Columns 1-2 of the swept Jost matrix (Phi_+ or Phi_+^A) at x = -X are kept.
struct JostSweep {
    double lambda = 0;
    double X = 0;
    std::array<std::array<cplx, 2>, 2> block{};
    cplx companion33 = 1.0;
    CVec<3> col1{}, col2{};
    CVec<3> companion_col3{};
};

namespace detail {

// State layout (14 complex):
//   0..2  column 1 of the primary Jost matrix
//   3..5  column 2
//   6..9  accumulators for entries (1,1),(1,2),(2,1),(2,2)
//   10..12 column 3 of the companion Jost matrix
//   13    accumulator for its (3,3) entry
// Primary flow, sigma = sign(lambda):
//   Phi_x = sigma (l_i - l_j) Phi_ij + sigma (M Phi),  M = L1 (sigma>0) or L1^T
// Companion flow uses -sigma and the other of L1, L1^T.
inline JostSweep jost_sweep(const InitialData& data, double lambda, const ScatteringOptions& opt) {
    if (lambda == 0.0 || !std::isfinite(lambda))
        throw DomainError("spectral parameter at essential singularity (lambda = 0)");
    const double X = truncation_for(data, opt);
    const double sigma = lambda > 0 ? 1.0 : -1.0;
    const auto ex = eigen_exponents(lambda);
    const auto& l = ex.l;
    const cplx d12 = l[0] - l[1];

    auto rhs = [&](double x, const CVec<14>& y, CVec<14>& dy) {
        const Matrix3C L1 = build_L1(data.u0_at(x), data.w_at(x), lambda);
        // primary M and companion M'
        auto Mp = [&](int i, int k) { return sigma > 0 ? L1(i, k) : L1(k, i); };
        auto Mc = [&](int i, int k) { return sigma > 0 ? L1(k, i) : L1(i, k); };
        std::array<std::array<cplx, 2>, 3> MPhi{};
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 3; ++i) {
                cplx acc = 0;
                for (int k = 0; k < 3; ++k) acc += Mp(i, k) * y[3 * j + k];
                MPhi[i][j] = acc;
                dy[3 * j + i] = sigma * ((l[i] - l[j]) * y[3 * j + i] + acc);
            }
        const cplx ph = std::exp(-sigma * x * d12); // unimodular for real lambda
        dy[6] = -MPhi[0][0];
        dy[7] = -ph * MPhi[0][1];
        dy[8] = -MPhi[1][0] / ph;
        dy[9] = -MPhi[1][1];
        cplx last = 0;
        for (int i = 0; i < 3; ++i) {
            cplx acc = 0;
            for (int k = 0; k < 3; ++k) acc += Mc(i, k) * y[10 + k];
            dy[10 + i] = -sigma * ((l[i] - l[2]) * y[10 + i] + acc);
            if (i == 2) last = acc;
        }
        dy[13] = -last;
    };

    CVec<14> y{};
    y[0] = 1.0;  // e1
    y[4] = 1.0;  // e2
    y[12] = 1.0; // e3
    const double hmax = max_step_for(lambda, opt);
    if (opt.integrator == JostIntegrator::rk4_fixed) {
        const auto n = static_cast<std::size_t>(std::ceil(2.0 * X / hmax));
        y = integrate_rk4<14>(rhs, X, -X, y, n);
    } else {
        OdeOptions o;
        o.abs_tol = opt.abs_tol;
        o.rel_tol = opt.rel_tol;
        o.max_step = hmax;
        y = integrate_dopri5<14>(rhs, X, -X, y, o, lambda);
    }

    JostSweep r;
    r.lambda = lambda;
    r.X = X;
    r.block[0][0] = 1.0 - sigma * y[6];
    r.block[0][1] = -sigma * y[7];
    r.block[1][0] = -sigma * y[8];
    r.block[1][1] = 1.0 - sigma * y[9];
    r.companion33 = 1.0 + sigma * y[13];
    r.col1 = {y[0], y[1], y[2]};
    r.col2 = {y[3], y[4], y[5]};
    r.companion_col3 = {y[10], y[11], y[12]};
    return r;
}

} // namespace detail

struct JostColumns {
    CVec<3> col1, col2; // columns 1, 2 of Phi_+ at x = -X
    double X;
};

inline JostColumns jost_plus_columns(const InitialData& data, double lambda,
                                     const ScatteringOptions& opt = {}) {
    if (lambda <= 0.0)
        throw DomainError("jost_plus_columns: columns 1-2 of Phi_+ are only stable for lambda > 0");
    auto s = detail::jost_sweep(data, lambda, opt);
    return {s.col1, s.col2, s.X};
}

// Full Phi_+ (all three columns) at x = -X; validation use only, since
// column 3 grows like exp(Re(l3 - l1) * 2X).
inline Matrix3C jost_plus_full(const InitialData& data, cplx lambda, const ScatteringOptions& opt = {}) {
    require_nonzero(lambda);
    const double X = truncation_for(data, opt);
    const auto ex = eigen_exponents(lambda);
    auto rhs = [&](double x, const CVec<9>& y, CVec<9>& dy) {
        const Matrix3C L1 = build_L1(data.u0_at(x), data.w_at(x), lambda);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                cplx acc = 0;
                for (int k = 0; k < 3; ++k) acc += L1(i, k) * y[3 * k + j];
                dy[3 * i + j] = (ex.l[i] - ex.l[j]) * y[3 * i + j] + acc;
            }
    };
    CVec<9> y{};
    y[0] = y[4] = y[8] = 1.0;
    OdeOptions o;
    o.abs_tol = opt.abs_tol;
    o.rel_tol = opt.rel_tol;
    o.max_step = opt.step_scale / std::max({1.0, std::abs(lambda), 1.0 / std::abs(lambda)});
    y = integrate_dopri5<9>(rhs, X, -X, y, o, std::abs(lambda));
    return Matrix3C(y);
}

struct SPair {
    cplx first;  // s11 or sA11
    cplx second; // s12 or sA12
};

inline SPair compute_s(const InitialData& data, double lambda, const ScatteringOptions& opt = {}) {
    if (!(lambda > 0)) throw DomainError("compute_s: lambda must be positive");
    auto s = detail::jost_sweep(data, lambda, opt);
    return {s.block[0][0], s.block[0][1]};
}

inline SPair compute_sA(const InitialData& data, double lambda, const ScatteringOptions& opt = {}) {
    if (!(lambda < 0)) throw DomainError("compute_sA: lambda must be negative");
    auto s = detail::jost_sweep(data, lambda, opt);
    return {s.block[0][0], s.block[0][1]};
}

// One validated sample on the real line.
//   lambda > 0: s11..s22 are entries of s, companion33 = sA_33, r = r1
//   lambda < 0: s11..s22 are entries of sA, companion33 = s_33, r = r2
// det_residual = |m33 / companion33 - 1| (cofactor identity for det = 1).
// sym_residual = max(|s11 - conj s22|, |s12 - conj s21|) (B-conjugation on R).
struct ScatteringSample {
    double lambda = 0;
    cplx s11 = 1.0, s12 = 0.0, s21 = 0.0, s22 = 1.0;
    cplx companion33 = 1.0;
    cplx r = 0.0;
    double det_residual = 0;
    double sym_residual = 0;

    bool cofactor() const { return lambda < 0; }
    cplx sA11() const { return cofactor() ? s11 : cplx(NAN, NAN); }
    cplx sA12() const { return cofactor() ? s12 : cplx(NAN, NAN); }
};

inline double det_residual_of(const ScatteringSample& s) {
    const cplx m33 = s.s11 * s.s22 - s.s12 * s.s21;
    return std::abs(m33 / s.companion33 - 1.0);
}

inline double sym_residual_of(const ScatteringSample& s) {
    return std::max(std::abs(s.s11 - std::conj(s.s22)), std::abs(s.s12 - std::conj(s.s21)));
}

// Scattering data at one real lambda without the soliton guard.
inline ScatteringSample scattering_sample_unchecked(const InitialData& data, double lambda,
                                                    const ScatteringOptions& opt = {}) {
    auto sw = detail::jost_sweep(data, lambda, opt);
    ScatteringSample s;
    s.lambda = lambda;
    s.s11 = sw.block[0][0];
    s.s12 = sw.block[0][1];
    s.s21 = sw.block[1][0];
    s.s22 = sw.block[1][1];
    s.companion33 = sw.companion33;
    s.r = s.s12 / s.s11;
    s.det_residual = det_residual_of(s);
    s.sym_residual = sym_residual_of(s);
    return s;
}

inline void soliton_guard(double lambda, cplx s11, double tol) {
    if (!(std::abs(s11) >= tol))
        throw SolitonSuspicion("soliton suspicion: |s11| = " + format_number(std::abs(s11)) +
                                   " below soliton_tol at lambda = " + format_number(lambda),
                               lambda, std::abs(s11));
}

inline ScatteringSample scattering_sample(const InitialData& data, double lambda,
                                          const ScatteringOptions& opt = {}) {
    auto s = scattering_sample_unchecked(data, lambda, opt);
    soliton_guard(lambda, s.s11, opt.soliton_tol);
    return s;
}

inline cplx reflection_r1(const InitialData& data, double lambda, const ScatteringOptions& opt = {}) {
    auto s = compute_s(data, lambda, opt);
    soliton_guard(lambda, s.first, opt.soliton_tol);
    return s.second / s.first;
}

inline cplx reflection_r2(const InitialData& data, double lambda, const ScatteringOptions& opt = {}) {
    auto s = compute_sA(data, lambda, opt);
    soliton_guard(lambda, s.first, opt.soliton_tol);
    return s.second / s.first;
}

enum class GridSpacing { log, linear };

struct GridSpec {
    double lambda_min = 0.02;
    double lambda_max = 30.0;
    std::size_t count = 400; // per sign
    GridSpacing spacing = GridSpacing::log;

    void check() const {
        if (!(lambda_min > 0) || !(lambda_max > lambda_min))
            throw DomainError("grid: need 0 < lambda_min < lambda_max");
        if (count < 3) throw DomainError("grid: need at least 3 points per sign");
    }

    // increasing magnitudes in [lambda_min, lambda_max]
    std::vector<double> magnitudes() const {
        check();
        std::vector<double> m(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double f = static_cast<double>(i) / static_cast<double>(count - 1);
            m[i] = spacing == GridSpacing::log
                       ? std::exp(std::log(lambda_min) + f * (std::log(lambda_max) - std::log(lambda_min)))
                       : lambda_min + f * (lambda_max - lambda_min);
        }
        m.front() = lambda_min;
        m.back() = lambda_max;
        return m;
    }
};

// r1 on (0, Lmax], r2 on [-Lmax, 0); cubic splines of Re and Im in
// log|lambda| (log grids) or |lambda| (linear grids). Zero outside range.
class ReflectionTable {
public:
    ReflectionTable() = default;

    ReflectionTable(std::vector<ScatteringSample> pos, std::vector<ScatteringSample> neg,
                    GridSpacing spacing)
        : pos_(std::move(pos)), neg_(std::move(neg)), spacing_(spacing) {
        auto by_mag = [](const ScatteringSample& a, const ScatteringSample& b) {
            return std::abs(a.lambda) < std::abs(b.lambda);
        };
        std::sort(pos_.begin(), pos_.end(), by_mag);
        std::sort(neg_.begin(), neg_.end(), by_mag);
        for (const auto& s : pos_)
            if (!(s.lambda > 0)) throw DomainError("ReflectionTable: positive half has lambda <= 0");
        for (const auto& s : neg_)
            if (!(s.lambda < 0)) throw DomainError("ReflectionTable: negative half has lambda >= 0");
        build(pos_, re1_, im1_);
        build(neg_, re2_, im2_);
        // samples are kept with the negative half in increasing lambda order
        std::reverse(neg_.begin(), neg_.end());
    }

    const std::vector<ScatteringSample>& positive() const { return pos_; }
    const std::vector<ScatteringSample>& negative() const { return neg_; }
    GridSpacing spacing() const { return spacing_; }

    std::vector<double> lambda_grid_pos() const { return lambdas(pos_); }
    std::vector<double> lambda_grid_neg() const { return lambdas(neg_); }

    double pos_min() const { return pos_.empty() ? 0 : pos_.front().lambda; }
    double pos_max() const { return pos_.empty() ? 0 : pos_.back().lambda; }
    double neg_min_abs() const { return neg_.empty() ? 0 : -neg_.back().lambda; }
    double neg_max_abs() const { return neg_.empty() ? 0 : -neg_.front().lambda; }

    // r1(lambda) for lambda > 0, r2(lambda) for lambda < 0
    cplx r(double lambda, cplx* drdlambda = nullptr) const {
        const bool p = lambda > 0;
        const auto& re = p ? re1_ : re2_;
        const auto& im = p ? im1_ : im2_;
        const double m = std::abs(lambda);
        if (re.empty() || lambda == 0.0 || m < mag(p, true) || m > mag(p, false)) {
            if (drdlambda) *drdlambda = 0.0;
            return 0.0;
        }
        const double s = abscissa(m);
        double dre = 0, dim = 0;
        const cplx v(re.eval(s, &dre), im.eval(s, &dim));
        if (drdlambda) {
            // chain rule through the abscissa, then d|lambda|/dlambda = sign
            const double ds = spacing_ == GridSpacing::log ? 1.0 / m : 1.0;
            *drdlambda = cplx(dre, dim) * ds * (p ? 1.0 : -1.0);
        }
        return v;
    }

    cplx r1(double lambda) const { return lambda > 0 ? r(lambda) : throw DomainError("r1 needs lambda > 0"); }
    cplx r2(double lambda) const { return lambda < 0 ? r(lambda) : throw DomainError("r2 needs lambda < 0"); }

    // g(lambda) = ln(1 - |r|^2) and its derivative
    double g(double lambda, double* dg = nullptr) const {
        cplx dr;
        const cplx v = r(lambda, &dr);
        const double a2 = std::norm(v);
        if (a2 >= 1.0) throw DomainError("|r| >= 1 in reflection table interpolant");
        if (dg) *dg = -2.0 * std::real(std::conj(v) * dr) / (1.0 - a2);
        return std::log1p(-a2);
    }

    double max_abs_r() const {
        double m = 0;
        for (const auto& s : pos_) m = std::max(m, std::abs(s.r));
        for (const auto& s : neg_) m = std::max(m, std::abs(s.r));
        return m;
    }

    void write_csv(std::ostream& os) const {
        CsvWriter w(os, {"lambda", "re_r", "im_r", "abs_r", "det_residual", "sym_residual"});
        for (const auto& s : neg_)
            w.row(s.lambda, s.r.real(), s.r.imag(), std::abs(s.r), s.det_residual, s.sym_residual);
        for (const auto& s : pos_)
            w.row(s.lambda, s.r.real(), s.r.imag(), std::abs(s.r), s.det_residual, s.sym_residual);
    }

private:
    double abscissa(double m) const { return spacing_ == GridSpacing::log ? std::log(m) : m; }

    double mag(bool p, bool lo) const {
        if (p) return lo ? pos_min() : pos_max();
        return lo ? neg_min_abs() : neg_max_abs();
    }

    void build(const std::vector<ScatteringSample>& v, CubicSpline& re, CubicSpline& im) {
        if (v.empty()) return;
        if (v.size() < 3) throw DomainError("ReflectionTable: need >= 3 samples per sign");
        std::vector<double> s, a, b;
        for (const auto& x : v) {
            s.push_back(abscissa(std::abs(x.lambda)));
            a.push_back(x.r.real());
            b.push_back(x.r.imag());
        }
        re = CubicSpline(s, a);
        im = CubicSpline(s, std::move(b));
    }

    static std::vector<double> lambdas(const std::vector<ScatteringSample>& v) {
        std::vector<double> out;
        for (const auto& s : v) out.push_back(s.lambda);
        return out;
    }

    std::vector<ScatteringSample> pos_, neg_;
    GridSpacing spacing_ = GridSpacing::log;
    CubicSpline re1_, im1_, re2_, im2_;
};

inline ReflectionTable build_reflection_table(const InitialData& data, const GridSpec& grid,
                                              const ScatteringOptions& opt = {},
                                              unsigned workers = 1) {
    const auto mags = grid.magnitudes();
    const std::size_t n = mags.size();
    std::vector<ScatteringSample> pos(n), neg(n);
    std::vector<double> bad;
    std::string first_msg;
    std::mutex m;
    parallel_for(2 * n, workers, [&](std::size_t k) {
        const double lam = k < n ? mags[k] : -mags[k - n];
        try {
            auto s = scattering_sample(data, lam, opt);
            (k < n ? pos[k] : neg[k - n]) = s;
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lk(m);
            bad.push_back(lam);
            if (first_msg.empty()) first_msg = e.what();
        }
    });
    if (!bad.empty()) {
        std::sort(bad.begin(), bad.end());
        std::string list;
        for (std::size_t i = 0; i < bad.size() && i < 20; ++i)
            list += (i ? ", " : "") + format_number(bad[i]);
        if (bad.size() > 20) list += ", ...";
        throw SweepError("reflection table failed at " + std::to_string(bad.size()) +
                             " lambda value(s): " + list + " (first error: " + first_msg + ")",
                         std::move(bad));
    }
    return ReflectionTable(std::move(pos), std::move(neg), grid.spacing);
}

struct ScatteringTolerances {
    double det = 1e-8;
    double sym = 1e-6;
    double decay = 1e-6; // |r| at the grid ends
};

struct ScatteringReport {
    double max_det_residual = 0;
    double max_sym_residual = 0;
    double worst_det_lambda = 0;
    double worst_sym_lambda = 0;
    // |r| at the smallest and largest |lambda| for each sign
    double r_small_pos = 0, r_large_pos = 0, r_small_neg = 0, r_large_neg = 0;
    std::vector<double> flagged; // lambdas violating det or sym tolerance
    bool decay_ok = true;
    bool pass = true;
};

inline ScatteringReport validate_scattering(const std::vector<ScatteringSample>& samples,
                                            const ScatteringTolerances& tol = {}) {
    ScatteringReport rep;
    double pmin = INFINITY, pmax = 0, nmin = INFINITY, nmax = 0;
    for (const auto& s : samples) {
        if (s.det_residual > rep.max_det_residual || std::isnan(s.det_residual)) {
            rep.max_det_residual = s.det_residual;
            rep.worst_det_lambda = s.lambda;
        }
        if (s.sym_residual > rep.max_sym_residual || std::isnan(s.sym_residual)) {
            rep.max_sym_residual = s.sym_residual;
            rep.worst_sym_lambda = s.lambda;
        }
        if (!(s.det_residual < tol.det) || !(s.sym_residual < tol.sym)) rep.flagged.push_back(s.lambda);
        const double m = std::abs(s.lambda), a = std::abs(s.r);
        if (s.lambda > 0) {
            if (m < pmin) pmin = m, rep.r_small_pos = a;
            if (m > pmax) pmax = m, rep.r_large_pos = a;
        } else {
            if (m < nmin) nmin = m, rep.r_small_neg = a;
            if (m > nmax) nmax = m, rep.r_large_neg = a;
        }
    }
    rep.decay_ok = rep.r_small_pos < tol.decay && rep.r_large_pos < tol.decay &&
                   rep.r_small_neg < tol.decay && rep.r_large_neg < tol.decay;
    rep.pass = rep.flagged.empty() && rep.decay_ok;
    return rep;
}

inline std::vector<ScatteringSample> all_samples(const ReflectionTable& t) {
    std::vector<ScatteringSample> v(t.negative());
    v.insert(v.end(), t.positive().begin(), t.positive().end());
    return v;
}

} // namespace tzitzeica
