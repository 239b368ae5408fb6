#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <vector>

#include "csv.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "scattering.hpp"
#include "special_functions.hpp"
#include "spectral_core.hpp"

namespace tzitzeica {

struct AsymptoticOptions {
    SectorThresholds thresholds{};
    double nu_floor = 1e-10;
    double quad_abs_tol = 1e-12;
    double quad_rel_tol = 1e-10;
};

inline double nu_from_r(double r_abs) {
    if (!(r_abs >= 0.0) || !(r_abs < 1.0))
        throw DomainError("nu_from_r: |r| must lie in [0, 1)");
    return -std::log1p(-r_abs * r_abs) / (2.0 * std::numbers::pi);
}

struct ModelCoefficients {
    enum class Which { plus, minus };
    cplx beta12;
    cplx beta21;
    Which which;
};

namespace detail {

inline void check_model_args(cplx y, double nu) {
    const double a = std::abs(y);
    if (!(a > 0.0 && a < 1.0)) throw DomainError("model coefficients: need 0 < |y| < 1");
    if (!(nu > 0.0)) throw DomainError("model coefficients: nu must be positive");
    const double expect = nu_from_r(a);
    if (std::abs(expect - nu) > 1e-10 * std::max(1.0, nu))
        throw ConsistencyError("model coefficients: nu inconsistent with |y|");
}

} // namespace detail

// expansion coefficients of the model problem at +lambda0
inline ModelCoefficients beta_plus(cplx y, double nu) {
    detail::check_model_args(y, nu);
    using std::numbers::pi;
    const cplx g_p = std::exp(log_gamma_complex({0.0, nu}));   // Gamma(i nu)
    const cplx g_m = std::exp(log_gamma_complex({0.0, -nu}));  // Gamma(-i nu)
    const double s = std::sqrt(2.0 * pi) * std::exp(-pi * nu / 2.0);
    ModelCoefficients m;
    m.which = ModelCoefficients::Which::plus;
    m.beta12 = -s * std::polar(1.0, pi / 4.0) / (std::conj(y) * g_p);
    m.beta21 = -s * std::polar(1.0, -pi / 4.0) / (y * g_m);
    return m;
}

// expansion coefficients of the model problem at -lambda0
inline ModelCoefficients beta_minus(cplx y, double nu) {
    detail::check_model_args(y, nu);
    using std::numbers::pi;
    const cplx g_p = std::exp(log_gamma_complex({0.0, nu}));
    const cplx g_m = std::exp(log_gamma_complex({0.0, -nu}));
    const double r2pi = std::sqrt(2.0 * pi);
    ModelCoefficients m;
    m.which = ModelCoefficients::Which::minus;
    m.beta12 = -r2pi * std::polar(1.0, -pi / 4.0) * std::exp(-5.0 * pi * nu / 2.0) / (y * g_m);
    m.beta21 = -r2pi * std::polar(1.0, pi / 4.0) * std::exp(3.0 * pi * nu / 2.0) / (std::conj(y) * g_p);
    return m;
}

struct AsymptoticParams {
    double lambda0 = 0;
    double nu1 = 0;
    double nu4 = 0;
    double s1 = 0;
    double s2 = 0;
    cplx y1 = 0; // r1(lambda0)
    cplx y2 = 0; // r2(-lambda0)
    bool degenerate1 = true; // nu1 <= nu_floor: s1 not computed, term dropped
    bool degenerate4 = true;
    bool degenerate() const { return degenerate1 && degenerate4; }
};

// Log-ratio integrals against g'(s), g = ln(1 - |r(s)|^2), for both
// halves of the table. Returned already divided by pi; each entry is
// the signed integral from 0 to +-lambda0 as written.
struct StieltjesTerms {
    double Ia = 0; // int_0^{-l0} ln(|s - w l0| / |s - l0|) g2' ds
    double Ib = 0; // int_0^{l0}  ln(|s - l0| / |s - w l0|) g1' ds
    double Ic = 0; // int_0^{l0}  ln(|s + w l0| / |s + l0|) g1' ds
    double Id = 0; // int_0^{-l0} ln(|s + l0| / |s + w l0|) g2' ds
};

inline StieltjesTerms stieltjes_terms(const ReflectionTable& table, double l0,
                                      const AsymptoticOptions& opt = {}) {
    using std::numbers::pi;
    StieltjesTerms st;
    const cplx wl = omega * l0;
    auto dg = [&](double s) {
        double d = 0;
        table.g(s, &d);
        return d;
    };
    auto quad = [&](auto&& f, double a, double b) {
        if (!(b > a)) return 0.0;
        return integrate_gk(f, a, b, opt.quad_abs_tol, opt.quad_rel_tol).value;
    };
    // positive half: g1' vanishes outside [pos_min, pos_max]
    const double pa = table.pos_min(), pb = std::min(l0, table.pos_max());
    st.Ib = quad([&](double s) { return std::log(std::abs(s - l0) / std::abs(s - wl)) * dg(s); }, pa, pb) / pi;
    st.Ic = quad([&](double s) { return std::log(std::abs(s + wl) / std::abs(s + l0)) * dg(s); }, pa, pb) / pi;
    // negative half, int_0^{-l0} = -int_{-l0}^0
    const double na = -std::min(l0, table.neg_max_abs()), nb = -table.neg_min_abs();
    st.Ia = -quad([&](double s) { return std::log(std::abs(s - wl) / std::abs(s - l0)) * dg(s); }, na, nb) / pi;
    st.Id = -quad([&](double s) { return std::log(std::abs(s + l0) / std::abs(s + wl)) * dg(s); }, na, nb) / pi;
    return st;
}

inline bool lambda0_in_table(const ReflectionTable& table, double l0) {
    return l0 >= table.pos_min() && l0 <= table.pos_max() && l0 >= table.neg_min_abs() &&
           l0 <= table.neg_max_abs();
}

inline AsymptoticParams phase_constants(const ReflectionTable& table, double lambda0,
                                        const AsymptoticOptions& opt = {}) {
    if (!(lambda0 > 0)) throw DomainError("phase_constants: lambda0 must be positive");
    if (!lambda0_in_table(table, lambda0))
        throw DomainError("phase_constants: lambda0 = " + format_number(lambda0) +
                          " outside the reflection table range");
    AsymptoticParams p;
    p.lambda0 = lambda0;
    p.y1 = table.r(lambda0);
    p.y2 = table.r(-lambda0);
    p.nu1 = nu_from_r(std::abs(p.y1));
    p.nu4 = nu_from_r(std::abs(p.y2));
    p.degenerate1 = !(p.nu1 > opt.nu_floor);
    p.degenerate4 = !(p.nu4 > opt.nu_floor);
    if (p.degenerate()) return p;
    const auto st = stieltjes_terms(table, lambda0, opt);
    const double ln4 = std::log(4.0);
    if (!p.degenerate1)
        p.s1 = -(std::arg(p.y1) + arg_gamma({0.0, -p.nu1}) + p.nu4 * ln4) + st.Ia + st.Ib;
    if (!p.degenerate4)
        p.s2 = -(std::arg(p.y2) + arg_gamma({0.0, -p.nu4}) + p.nu1 * ln4) + st.Ic + st.Id;
    return p;
}

// Leading-order waveform for |x| < t, independent of the sector cut.
inline double leading_order_formula(double x, double t, const ReflectionTable& table,
                                    const AsymptoticOptions& opt = {}, AsymptoticParams* out = nullptr) {
    using std::numbers::pi;
    if (!(t > 0)) throw DomainError("asymptotics: t must be positive");
    if (!(std::abs(x) < t)) throw DomainError("leading-order formula needs |x| < t");
    const double l0 = critical_lambda0(x, t);
    const auto p = phase_constants(table, l0, opt);
    if (out) *out = p;
    if (p.degenerate()) return 0.0;
    const double q = 1.0 + l0 * l0;
    const double theta = 2.0 * sqrt3 * t * l0 / q;
    const double lg = std::log(6.0 * sqrt3 * t * l0 / q);
    const double amp = std::pow(3.0, -0.25) * std::sqrt(2.0 * q / (t * l0));
    double bracket = 0.0;
    if (!p.degenerate1) bracket += std::sqrt(p.nu1) * std::cos(5.0 * pi / 12.0 - theta - p.nu1 * lg + p.s1);
    if (!p.degenerate4) bracket -= std::sqrt(p.nu4) * std::cos(13.0 * pi / 12.0 - theta - p.nu4 * lg + p.s2);
    const double arg = 1.0 + amp * bracket;
    if (!(arg > 0.0))
        throw ValidityError("amplitude exceeds validity at x = " + format_number(x) +
                            ", t = " + format_number(t) + " (asymptotic regime not reached)");
    return std::log(arg);
}

// Sector IV: leading-order formula; Sectors I-III: 0.
inline double u_asymptotic(double x, double t, const ReflectionTable& table,
                           const AsymptoticOptions& opt = {}) {
    const auto sector = classify_sector(x, t, opt.thresholds);
    if (sector != SectorLabel::IV) return 0.0;
    return leading_order_formula(x, t, table, opt);
}

inline std::vector<double> u_asymptotic_curve(const std::vector<double>& xs, double t,
                                              const ReflectionTable& table,
                                              const AsymptoticOptions& opt = {}, unsigned workers = 1) {
    std::vector<double> out(xs.size());
    parallel_for(xs.size(), workers, [&](std::size_t i) { out[i] = u_asymptotic(xs[i], t, table, opt); });
    return out;
}

inline void write_asymptotic_csv(std::ostream& os, const std::vector<double>& xs,
                                 const std::vector<double>& ts, const std::vector<double>& u,
                                 const AsymptoticOptions& opt = {}) {
    CsvWriter w(os, {"x", "t", "sector", "u_asym"});
    for (std::size_t i = 0; i < xs.size(); ++i)
        w.row(xs[i], ts[i], std::string(to_string(classify_sector(xs[i], ts[i], opt.thresholds))), u[i]);
}

} // namespace tzitzeica
