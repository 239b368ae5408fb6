#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "csv.hpp"
#include "errors.hpp"
#include "initial_data.hpp"
#include "parallel.hpp"
#include "pde.hpp"
#include "scattering.hpp"

namespace tzitzeica {

enum class DataKind { gaussian, file, zero };

struct DataSpec {
    DataKind kind = DataKind::gaussian;
    double amplitude = -0.1;
    double width = 1.0;
    double extent = 12.0;  // sampled half-width
    double spacing = 0.01; // sample spacing
    std::string file;
};

inline InitialData make_initial_data(const DataSpec& d) {
    switch (d.kind) {
    case DataKind::gaussian: return make_gaussian(d.amplitude, d.width, d.extent, d.spacing);
    case DataKind::zero: return make_zero_data(d.extent, d.spacing);
    default: return load_initial_data_csv(d.file);
    }
}

struct ExperimentConfig {
    DataSpec data;
    GridSpec grid;
    ScatteringOptions scatter;
    double tail_tol = 1e-10;
    AsymptoticOptions asym;
    PdeConfig pde;
    std::vector<double> times{20, 30, 40, 50};
    std::vector<double> snapshot_times{20, 50};
    double window = 0.8;
    double rel_rms_bound = 0.03;
    double audit_radius = 10.0; // support radius used by the light-cone audit
    double audit_threshold = 1e-6;
    std::string output_dir = "out";
    unsigned workers = default_workers();

    void check() const {
        if (times.empty()) throw ConfigError("compare.times must not be empty");
        for (double t : times)
            if (!(t > 0) || t > pde.t_max + 1e-12)
                throw ConfigError("compare.times: every time must lie in (0, pde.t_max]");
        for (double t : snapshot_times)
            if (!(t >= 0) || t > pde.t_max + 1e-12)
                throw ConfigError("pde.snapshot_times: every time must lie in [0, pde.t_max]");
        if (!(window > 0 && window < asym.thresholds.inner))
            throw ConfigError("compare.window must lie in (0, asym.inner)");
    }
};

// Failure in one pipeline stage; `stage` names it.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what, bool numeric)
        : std::runtime_error("stage '" + stage + "': " + what), stage_(std::move(stage)), numeric_(numeric) {}
    const std::string& stage() const noexcept { return stage_; }
    bool numeric() const noexcept { return numeric_; }

private:
    std::string stage_;
    bool numeric_;
};

template <class F>
auto run_stage(const std::string& name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const ConfigError& e) {
        throw StageError(name, e.what(), false);
    } catch (const std::exception& e) {
        throw StageError(name, e.what(), true);
    }
}

struct TimeRecord {
    double t_requested = 0;
    double t = 0; // exact PDE grid time
    double max_abs_err = 0;
    double rms_err = 0;
    double rms_signal = 0;
    double rel_rms = 0;
};

struct DecayFit {
    double C = 0;              // err ~ C ln t / t, least squares through the origin
    double exponent_check = 0; // slope of log err vs log t
    double resid_lnt = 0;      // log-space RMS misfit of the ln t / t model
    double resid_half = 0;     // same for the t^{-1/2} model
    bool exponent_ok = false;  // exponent in [-1.4, -0.6]
    bool half_rejected = false;
    bool pass = false;
};

inline DecayFit fit_error_decay(const std::vector<TimeRecord>& records, double lo = -1.4, double hi = -0.6) {
    if (records.size() < 3) throw DomainError("fit_error_decay: need at least 3 records");
    std::vector<double> t, e;
    for (const auto& r : records) {
        t.push_back(r.t);
        e.push_back(r.max_abs_err);
    }
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j)
            if (t[i] == t[j]) throw DomainError("fit_error_decay: degenerate (repeated) times");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 1.0)) throw DomainError("fit_error_decay: times must exceed 1");
        if (!(e[i] > 0.0)) throw DomainError("fit_error_decay: errors must be positive");
    }
    const std::size_t n = t.size();
    DecayFit f;
    double num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double q = std::log(t[i]) / t[i];
        num += e[i] * q;
        den += q * q;
    }
    f.C = num / den;
    // log-log slope
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(t[i]);
        my += std::log(e[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (std::log(t[i]) - mx) * (std::log(e[i]) - my);
        sxx += (std::log(t[i]) - mx) * (std::log(t[i]) - mx);
    }
    f.exponent_check = sxy / sxx;
    // one-parameter models in log space: log e = log c + log phi(t)
    auto misfit = [&](auto phi) {
        double m = 0;
        for (std::size_t i = 0; i < n; ++i) m += std::log(e[i]) - std::log(phi(t[i]));
        m /= n;
        double r = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = std::log(e[i]) - std::log(phi(t[i])) - m;
            r += d * d;
        }
        return std::sqrt(r / n);
    };
    f.resid_lnt = misfit([](double s) { return std::log(s) / s; });
    f.resid_half = misfit([](double s) { return 1.0 / std::sqrt(s); });
    f.exponent_ok = f.exponent_check >= lo && f.exponent_check <= hi;
    f.half_rejected = f.resid_lnt < f.resid_half;
    f.pass = f.exponent_ok && f.half_rejected;
    return f;
}

struct ConeRecord {
    double t = 0;
    double sup_outside = 0; // sup |u| over |x| > t + radius + 2
    double x_at_sup = 0;
};

struct LightConeReport {
    std::vector<ConeRecord> records;
    double threshold = 1e-6;
    double floor = 1e-12;     // below this the far field is data tail, not signal; shrinking is not checked
    double margin = INFINITY; // threshold / max sup
    bool shrinking = true;
    bool pass = true;
};

inline LightConeReport light_cone_audit(const std::vector<Snapshot>& snaps, double support_radius,
                                        double threshold = 1e-6) {
    LightConeReport rep;
    rep.threshold = threshold;
    rep.floor = threshold * 1e-6;
    double worst = 0;
    for (const auto& s : snaps) {
        ConeRecord c;
        c.t = s.t;
        const double edge = s.t + support_radius + 2.0;
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (std::abs(s.x[i]) > edge && std::abs(s.u[i]) > c.sup_outside) {
                c.sup_outside = std::abs(s.u[i]);
                c.x_at_sup = s.x[i];
            }
        worst = std::max(worst, c.sup_outside);
        if (!rep.records.empty() && c.sup_outside > rep.records.back().sup_outside &&
            c.sup_outside > rep.floor)
            rep.shrinking = false;
        if (!(c.sup_outside < threshold)) rep.pass = false;
        rep.records.push_back(c);
    }
    rep.margin = worst > 0 ? threshold / worst : INFINITY;
    rep.pass = rep.pass && rep.shrinking;
    return rep;
}

struct Overlay {
    double t_requested = 0;
    double t = 0;
    std::vector<double> x, u_numeric, u_asymptotic;
};

struct ComparisonReport {
    std::vector<TimeRecord> records; // sorted by t
    DecayFit fit;
    bool fit_available = false;
    LightConeReport cone;
    std::vector<Overlay> overlays;
    std::vector<Snapshot> snapshots;
    double energy_drift = 0;
    bool trivial = false;       // zero data: all errors and signals vanish
    bool decreasing = false;    // err(last) < err(first)
    bool rel_rms_ok = false;    // rel_rms at the last time below the bound
    bool pass = false;
};

struct PipelineProducts {
    InitialData data;
    ReflectionTable table;
};

inline PipelineProducts prepare_pipeline(const ExperimentConfig& cfg) {
    PipelineProducts p;
    p.data = run_stage("initial-data", [&] {
        auto d = make_initial_data(cfg.data);
        d.check_tails(cfg.tail_tol);
        return d;
    });
    p.table = run_stage("scattering", [&] { return build_reflection_table(p.data, cfg.grid, cfg.scatter, cfg.workers); });
    return p;
}

inline ComparisonReport run_comparison(const ExperimentConfig& cfg, const PipelineProducts& prod) {
    cfg.check();
    ComparisonReport rep;
    std::vector<double> times = cfg.times;
    std::sort(times.begin(), times.end());
    std::vector<double> snap_times = times;
    for (double t : cfg.snapshot_times) snap_times.push_back(t);
    std::sort(snap_times.begin(), snap_times.end());
    snap_times.erase(std::unique(snap_times.begin(), snap_times.end()), snap_times.end());

    const auto& data = prod.data;
    auto state = run_stage("pde-init", [&] {
        return init_state(cfg.pde, [&](double x) { return data.u0_at(x); }, [&](double x) { return data.u1_at(x); });
    });
    auto run = run_stage("pde", [&] { return run_until(state, times.back(), snap_times); });
    rep.energy_drift = energy(state).drift_rel;
    rep.snapshots = std::move(run.snapshots);

    for (double tq : times) {
        const auto it = std::find_if(rep.snapshots.begin(), rep.snapshots.end(),
                                     [&](const Snapshot& s) { return s.t_requested == tq; });
        const Snapshot& snap = *it;
        Overlay ov;
        ov.t_requested = tq;
        ov.t = snap.t;
        for (std::size_t i = 0; i < snap.x.size(); ++i)
            if (std::abs(snap.x[i]) <= cfg.window * tq) {
                ov.x.push_back(snap.x[i]);
                ov.u_numeric.push_back(snap.u[i]);
            }
        ov.u_asymptotic = run_stage("asymptotics", [&] {
            return u_asymptotic_curve(ov.x, snap.t, prod.table, cfg.asym, cfg.workers);
        });
        TimeRecord r;
        r.t_requested = tq;
        r.t = snap.t;
        double se = 0, ss = 0;
        for (std::size_t i = 0; i < ov.x.size(); ++i) {
            const double e = std::abs(ov.u_numeric[i] - ov.u_asymptotic[i]);
            r.max_abs_err = std::max(r.max_abs_err, e);
            se += e * e;
            ss += ov.u_numeric[i] * ov.u_numeric[i];
        }
        const double m = static_cast<double>(std::max<std::size_t>(1, ov.x.size()));
        r.rms_err = std::sqrt(se / m);
        r.rms_signal = std::sqrt(ss / m);
        r.rel_rms = r.rms_signal > 0 ? r.rms_err / r.rms_signal : (r.rms_err > 0 ? INFINITY : 0.0);
        rep.records.push_back(r);
        rep.overlays.push_back(std::move(ov));
    }

    rep.cone = light_cone_audit(rep.snapshots, cfg.audit_radius, cfg.audit_threshold);
    rep.trivial = std::all_of(rep.records.begin(), rep.records.end(),
                              [](const TimeRecord& r) { return r.max_abs_err == 0 && r.rms_signal == 0; });
    if (rep.trivial) {
        rep.decreasing = true;
        rep.rel_rms_ok = true;
        rep.pass = rep.cone.pass;
        return rep;
    }
    rep.decreasing = rep.records.back().max_abs_err < rep.records.front().max_abs_err;
    rep.rel_rms_ok = rep.records.back().rel_rms < cfg.rel_rms_bound;
    if (rep.records.size() >= 3) {
        rep.fit = run_stage("fit", [&] { return fit_error_decay(rep.records); });
        rep.fit_available = true;
    }
    rep.pass = rep.decreasing && rep.rel_rms_ok && rep.cone.pass && (!rep.fit_available || rep.fit.pass);
    return rep;
}

inline ComparisonReport run_comparison(const ExperimentConfig& cfg) {
    cfg.check();
    return run_comparison(cfg, prepare_pipeline(cfg));
}

inline std::string overlay_filename(double t) { return "overlay_t" + format_number(t) + ".csv"; }

inline void write_comparison_outputs(const ComparisonReport& rep, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream os(dir / "report.csv");
        CsvWriter w(os, {"t", "max_abs_err", "rms_err", "rms_signal", "rel_rms"});
        for (const auto& r : rep.records) w.row(r.t, r.max_abs_err, r.rms_err, r.rms_signal, r.rel_rms);
        if (!os) throw DomainError("cannot write report.csv");
    }
    {
        std::ofstream os(dir / "fit.csv");
        CsvWriter w(os, {"C", "exponent_check"});
        if (rep.fit_available) w.row(rep.fit.C, rep.fit.exponent_check);
        else w.row(0.0, std::nan(""));
        if (!os) throw DomainError("cannot write fit.csv");
    }
    for (const auto& ov : rep.overlays) {
        std::ofstream os(dir / overlay_filename(ov.t_requested));
        CsvWriter w(os, {"x", "u_numeric", "u_asymptotic", "abs_err"});
        for (std::size_t i = 0; i < ov.x.size(); ++i)
            w.row(ov.x[i], ov.u_numeric[i], ov.u_asymptotic[i], std::abs(ov.u_numeric[i] - ov.u_asymptotic[i]));
        if (!os) throw DomainError("cannot write overlay file");
    }
}

} // namespace tzitzeica
