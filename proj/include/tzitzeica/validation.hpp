#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "config.hpp"
#include "harness.hpp"
#include "pde.hpp"
#include "scattering.hpp"
#include "special_functions.hpp"

namespace tzitzeica {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

inline std::string fmt(double v) { return format_number(v); }

// Zero data through every stage.
inline CheckResult check_zero_chain(const AppConfig& cfg, std::size_t pde_steps = 100000) {
    CheckResult c{"zero-data identity", true, ""};
    auto z = make_zero_data(cfg.exp.data.extent, cfg.exp.data.spacing);
    auto tab = build_reflection_table(z, cfg.exp.grid, cfg.exp.scatter, cfg.exp.workers);
    double worst = 0;
    for (const auto& s : all_samples(tab)) {
        worst = std::max({worst, std::abs(s.s11 - 1.0), std::abs(s.s12), std::abs(s.s21), std::abs(s.s22 - 1.0),
                          std::abs(s.companion33 - 1.0), std::abs(s.r)});
    }
    double ua = 0;
    for (double x : {-10.0, -3.0, 0.0, 4.0, 15.0})
        ua = std::max(ua, std::abs(u_asymptotic(x, 20.0, tab, cfg.exp.asym)));
    PdeConfig p = cfg.exp.pde;
    p.t_max = 0;
    p.L = 0;
    auto st = init_state(p, [](double) { return 0.0; }, [](double) { return 0.0; });
    double up = 0;
    for (std::size_t k = 0; k < pde_steps; ++k) step(st);
    for (std::size_t i = 0; i < st.size(); ++i) up = std::max({up, std::abs(st.u[i]), std::abs(st.u_prev[i])});
    c.pass = worst < 1e-10 && ua == 0.0 && up == 0.0;
    c.detail = "max|s - I| = " + fmt(worst) + ", max|u_asym| = " + fmt(ua) + ", max|u_pde| after " +
               std::to_string(pde_steps) + " steps = " + fmt(up);
    return c;
}

inline CheckResult check_scattering(const ReflectionTable& tab, const ScatteringTolerances& tol, double soliton_tol) {
    CheckResult c{"scattering invariants", true, ""};
    const auto samples = all_samples(tab);
    const auto rep = validate_scattering(samples, tol);
    double min_s11 = INFINITY;
    for (const auto& s : samples) min_s11 = std::min(min_s11, std::abs(s.s11));
    c.pass = rep.pass && min_s11 > soliton_tol && tab.max_abs_r() < 1.0;
    c.detail = "samples = " + std::to_string(samples.size()) + ", max det residual = " + fmt(rep.max_det_residual) +
               ", max sym residual = " + fmt(rep.max_sym_residual) + ", min |s11| = " + fmt(min_s11) +
               ", |r| at ends = " + fmt(std::max({rep.r_small_pos, rep.r_large_pos, rep.r_small_neg, rep.r_large_neg})) +
               ", flagged = " + std::to_string(rep.flagged.size());
    return c;
}

inline CheckResult check_model_identities() {
    using std::numbers::pi;
    CheckResult c{"model-coefficient identities", true, ""};
    double worst_beta = 0, worst_gamma = 0;
    for (double nu : {0.01, 0.1, 0.5, 1.0, 2.0}) {
        const double a = std::sqrt(-std::expm1(-2.0 * pi * nu));
        const cplx y = std::polar(a, 0.7);
        const auto bp = beta_plus(y, nu), bm = beta_minus(y, nu);
        worst_beta = std::max({worst_beta, std::abs(std::abs(bp.beta12 * bp.beta21) - nu),
                               std::abs(std::abs(bm.beta12 * bm.beta21) - nu)});
        const double g2 = std::exp(2.0 * log_gamma_complex({0.0, nu}).real());
        const double ref = pi / (nu * std::sinh(pi * nu));
        worst_gamma = std::max(worst_gamma, std::abs(g2 - ref) / ref);
    }
    c.pass = worst_beta < 1e-12 && worst_gamma < 1e-12;
    c.detail = "max ||b12 b21| - nu| = " + fmt(worst_beta) + ", max rel err |Gamma(i nu)|^2 = " + fmt(worst_gamma);
    return c;
}

inline CheckResult check_pde(const AppConfig& cfg, const ComparisonReport& rep) {
    CheckResult c{"pde solver", true, ""};
    const auto& d = cfg.exp.data;
    InitialData data = make_initial_data(d);
    auto u0 = [&](double x) { return data.u0_at(x); };
    auto u1 = [&](double x) { return data.u1_at(x); };
    const auto conv = self_convergence(u0, u1, 10.0, 27.0, 2.0 * cfg.exp.pde.dx, cfg.exp.pde.cfl);
    const bool conv_ok = conv.rate >= 1.8 && conv.rate <= 2.2;
    c.pass = rep.energy_drift < 1e-6 && conv_ok && (rep.trivial || rep.cone.margin >= 100.0) && rep.cone.pass;
    c.detail = "energy drift = " + fmt(rep.energy_drift) + ", self-convergence rate = " + fmt(conv.rate) +
               ", causality margin = " + fmt(rep.cone.margin);
    return c;
}

inline CheckResult check_comparison(const AppConfig& cfg, const ComparisonReport& rep) {
    CheckResult c{"asymptotic comparison", rep.pass, ""};
    if (rep.trivial) {
        c.detail = "trivial (zero data)";
        return c;
    }
    c.detail = "err(" + fmt(rep.records.front().t) + ") = " + fmt(rep.records.front().max_abs_err) + ", err(" +
               fmt(rep.records.back().t) + ") = " + fmt(rep.records.back().max_abs_err) + ", rel_rms = " +
               fmt(rep.records.back().rel_rms) + " (bound " + fmt(cfg.exp.rel_rms_bound) + ")";
    if (rep.fit_available)
        c.detail += ", exponent = " + fmt(rep.fit.exponent_check) + ", misfit ln t/t = " + fmt(rep.fit.resid_lnt) +
                    " vs t^-1/2 = " + fmt(rep.fit.resid_half);
    return c;
}

inline std::vector<CheckResult> run_validation_suite(const AppConfig& cfg) {
    std::vector<CheckResult> out;
    out.push_back(check_zero_chain(cfg));
    out.push_back(check_model_identities());
    const auto prod = prepare_pipeline(cfg.exp);
    out.push_back(check_scattering(prod.table, cfg.validation, cfg.exp.scatter.soliton_tol));
    const auto rep = run_comparison(cfg.exp, prod);
    out.push_back(check_pde(cfg, rep));
    out.push_back(check_comparison(cfg, rep));
    return out;
}

} // namespace tzitzeica
