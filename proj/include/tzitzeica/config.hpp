#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "csv.hpp"
#include "errors.hpp"
#include "harness.hpp"

namespace tzitzeica {

// Everything a CLI run can be configured with.
struct AppConfig {
    ExperimentConfig exp;
    ScatteringTolerances validation;
    std::vector<double> asym_times{20, 50};
    std::size_t asym_x_count = 1001;
    double asym_x_factor = 1.2; // curve spans |x| <= factor * t
};

struct ConfigKey {
    std::string key;
    std::string unit;
    std::string help;
    std::function<void(AppConfig&, const std::string&)> set;
    std::function<std::string(const AppConfig&)> get;
};

namespace detail {

inline std::string trim(std::string s) {
    const char* ws = " \t\r\n";
    s.erase(0, s.find_first_not_of(ws));
    const auto e = s.find_last_not_of(ws);
    s.erase(e == std::string::npos ? 0 : e + 1);
    return s;
}

inline double num(const std::string& key, const std::string& v) {
    try {
        return parse_number(v);
    } catch (const DomainError&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

inline std::vector<double> num_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    if (trim(v).empty()) return out;
    for (auto part : split_commas(v)) out.push_back(num(key, trim(std::string(part))));
    return out;
}

inline std::string list_str(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
    return s;
}

inline void range(const std::string& key, double v, bool ok, const std::string& what) {
    if (!ok || !std::isfinite(v)) throw ConfigError(key + ": value " + format_number(v) + " out of range (" + what + ")");
}

using Setter = std::function<void(AppConfig&, double)>;

inline ConfigKey real_key(std::string key, std::string unit, std::string help, std::function<double&(AppConfig&)> ref,
                          std::function<bool(double)> ok, std::string what) {
    ConfigKey k;
    k.key = key;
    k.unit = std::move(unit);
    k.help = std::move(help);
    k.set = [key, ref, ok, what](AppConfig& c, const std::string& v) {
        const double x = num(key, v);
        range(key, x, ok(x), what);
        ref(c) = x;
    };
    k.get = [ref](const AppConfig& c) { return format_number(ref(const_cast<AppConfig&>(c))); };
    return k;
}

inline ConfigKey list_key(std::string key, std::string unit, std::string help,
                          std::function<std::vector<double>&(AppConfig&)> ref) {
    ConfigKey k;
    k.key = key;
    k.unit = std::move(unit);
    k.help = std::move(help);
    k.set = [key, ref](AppConfig& c, const std::string& v) {
        auto xs = num_list(key, v);
        for (double x : xs) range(key, x, x >= 0, ">= 0");
        ref(c) = xs;
    };
    k.get = [ref](const AppConfig& c) { return list_str(ref(const_cast<AppConfig&>(c))); };
    return k;
}

inline ConfigKey count_key(std::string key, std::string unit, std::string help,
                           std::function<std::size_t&(AppConfig&)> ref, double lo) {
    ConfigKey k;
    k.key = key;
    k.unit = std::move(unit);
    k.help = std::move(help);
    k.set = [key, ref, lo](AppConfig& c, const std::string& v) {
        const double x = num(key, v);
        range(key, x, x >= lo && x == std::floor(x) && x < 1e9, "integer >= " + format_number(lo));
        ref(c) = static_cast<std::size_t>(x);
    };
    k.get = [ref](const AppConfig& c) { return std::to_string(ref(const_cast<AppConfig&>(c))); };
    return k;
}

} // namespace detail

inline const std::vector<ConfigKey>& config_schema() {
    using namespace detail;
    static const std::vector<ConfigKey> keys = [] {
        auto pos = [](double v) { return v > 0; };
        auto nonneg = [](double v) { return v >= 0; };
        std::vector<ConfigKey> k;
        {
            ConfigKey c;
            c.key = "data.kind";
            c.unit = "-";
            c.help = "initial data: gaussian | zero | file";
            c.set = [](AppConfig& a, const std::string& v) {
                if (v == "gaussian") a.exp.data.kind = DataKind::gaussian;
                else if (v == "zero") a.exp.data.kind = DataKind::zero;
                else if (v == "file") a.exp.data.kind = DataKind::file;
                else throw ConfigError("data.kind: expected gaussian, zero or file, got '" + v + "'");
            };
            c.get = [](const AppConfig& a) {
                switch (a.exp.data.kind) {
                case DataKind::gaussian: return std::string("gaussian");
                case DataKind::zero: return std::string("zero");
                default: return std::string("file");
                }
            };
            k.push_back(c);
        }
        k.push_back(real_key("data.amplitude", "-", "gaussian amplitude of u0",
                             [](AppConfig& a) -> double& { return a.exp.data.amplitude; },
                             [](double) { return true; }, "finite"));
        k.push_back(real_key("data.width", "length", "gaussian width of u0",
                             [](AppConfig& a) -> double& { return a.exp.data.width; }, pos, "> 0"));
        k.push_back(real_key("data.extent", "length", "sampled half-width of built-in data",
                             [](AppConfig& a) -> double& { return a.exp.data.extent; }, pos, "> 0"));
        k.push_back(real_key("data.spacing", "length", "sample spacing of built-in data",
                             [](AppConfig& a) -> double& { return a.exp.data.spacing; }, pos, "> 0"));
        {
            ConfigKey c;
            c.key = "data.file";
            c.unit = "path";
            c.help = "CSV samples with header x,u0,u1 (data.kind = file)";
            c.set = [](AppConfig& a, const std::string& v) { a.exp.data.file = v; };
            c.get = [](const AppConfig& a) { return a.exp.data.file; };
            k.push_back(c);
        }
        k.push_back(real_key("data.tail_tol", "-", "max |u0|, |u1| allowed at the sample ends",
                             [](AppConfig& a) -> double& { return a.exp.tail_tol; }, pos, "> 0"));

        k.push_back(real_key("grid.lambda_min", "-", "smallest |lambda| of the reflection grid",
                             [](AppConfig& a) -> double& { return a.exp.grid.lambda_min; }, pos, "> 0"));
        k.push_back(real_key("grid.lambda_max", "-", "largest |lambda| of the reflection grid",
                             [](AppConfig& a) -> double& { return a.exp.grid.lambda_max; }, pos, "> 0"));
        k.push_back(count_key("grid.count", "-", "grid points per sign of lambda",
                              [](AppConfig& a) -> std::size_t& { return a.exp.grid.count; }, 3));
        {
            ConfigKey c;
            c.key = "grid.spacing";
            c.unit = "-";
            c.help = "grid spacing: log | linear";
            c.set = [](AppConfig& a, const std::string& v) {
                if (v == "log") a.exp.grid.spacing = GridSpacing::log;
                else if (v == "linear") a.exp.grid.spacing = GridSpacing::linear;
                else throw ConfigError("grid.spacing: expected log or linear, got '" + v + "'");
            };
            c.get = [](const AppConfig& a) {
                return std::string(a.exp.grid.spacing == GridSpacing::log ? "log" : "linear");
            };
            k.push_back(c);
        }

        k.push_back(real_key("scatter.X", "length", "Jost truncation half-width (0 = auto)",
                             [](AppConfig& a) -> double& { return a.exp.scatter.X; }, nonneg, ">= 0"));
        k.push_back(real_key("scatter.abs_tol", "-", "ODE absolute tolerance",
                             [](AppConfig& a) -> double& { return a.exp.scatter.abs_tol; }, pos, "> 0"));
        k.push_back(real_key("scatter.rel_tol", "-", "ODE relative tolerance",
                             [](AppConfig& a) -> double& { return a.exp.scatter.rel_tol; }, pos, "> 0"));
        k.push_back(real_key("scatter.step_scale", "length", "max step = step_scale / max(1, |lambda|, 1/|lambda|)",
                             [](AppConfig& a) -> double& { return a.exp.scatter.step_scale; }, pos, "> 0"));
        k.push_back(real_key("scatter.soliton_tol", "-", "minimum admissible |s11|",
                             [](AppConfig& a) -> double& { return a.exp.scatter.soliton_tol; }, pos, "> 0"));

        k.push_back(real_key("validate.det_tol", "-", "bound on |det s - 1|",
                             [](AppConfig& a) -> double& { return a.validation.det; }, pos, "> 0"));
        k.push_back(real_key("validate.sym_tol", "-", "bound on the B-symmetry residual",
                             [](AppConfig& a) -> double& { return a.validation.sym; }, pos, "> 0"));
        k.push_back(real_key("validate.decay_tol", "-", "bound on |r| at the grid ends",
                             [](AppConfig& a) -> double& { return a.validation.decay; }, pos, "> 0"));

        k.push_back(real_key("asym.inner", "-", "|x/t| at or below which Sector IV applies",
                             [](AppConfig& a) -> double& { return a.exp.asym.thresholds.inner; },
                             [](double v) { return v > 0 && v < 1; }, "in (0, 1)"));
        k.push_back(real_key("asym.outer", "-", "|x/t| above which Sector I applies",
                             [](AppConfig& a) -> double& { return a.exp.asym.thresholds.outer; },
                             [](double v) { return v >= 1; }, ">= 1"));
        k.push_back(real_key("asym.nu_floor", "-", "nu below which a critical-point term is dropped",
                             [](AppConfig& a) -> double& { return a.exp.asym.nu_floor; }, pos, "> 0"));
        k.push_back(list_key("asym.times", "time", "times of the asymptotic-curve export",
                             [](AppConfig& a) -> std::vector<double>& { return a.asym_times; }));
        k.push_back(count_key("asym.x_count", "-", "points per asymptotic curve",
                              [](AppConfig& a) -> std::size_t& { return a.asym_x_count; }, 2));
        k.push_back(real_key("asym.x_factor", "-", "asymptotic curves span |x| <= x_factor * t",
                             [](AppConfig& a) -> double& { return a.asym_x_factor; }, pos, "> 0"));

        k.push_back(real_key("pde.dx", "length", "grid spacing (dt = cfl * dx)",
                             [](AppConfig& a) -> double& { return a.exp.pde.dx; }, pos, "> 0"));
        k.push_back(real_key("pde.cfl", "-", "dt / dx",
                             [](AppConfig& a) -> double& { return a.exp.pde.cfl; },
                             [](double v) { return v > 0 && v <= 1; }, "in (0, 1]"));
        k.push_back(real_key("pde.t_max", "time", "final simulation time",
                             [](AppConfig& a) -> double& { return a.exp.pde.t_max; }, pos, "> 0"));
        k.push_back(real_key("pde.L", "length", "domain half-width (0 = t_max + support_radius + margin)",
                             [](AppConfig& a) -> double& { return a.exp.pde.L; }, nonneg, ">= 0"));
        k.push_back(real_key("pde.support_radius", "length", "effective support radius of the data",
                             [](AppConfig& a) -> double& { return a.exp.pde.support_radius; }, nonneg, ">= 0"));
        k.push_back(real_key("pde.margin", "length", "extra domain margin",
                             [](AppConfig& a) -> double& { return a.exp.pde.margin; }, nonneg, ">= 0"));
        k.push_back(real_key("pde.blowup_guard", "-", "abort when |u| exceeds this",
                             [](AppConfig& a) -> double& { return a.exp.pde.blowup_guard; }, pos, "> 0"));
        k.push_back(list_key("pde.snapshot_times", "time", "times written by evolve",
                             [](AppConfig& a) -> std::vector<double>& { return a.exp.snapshot_times; }));

        k.push_back(list_key("compare.times", "time", "comparison times",
                             [](AppConfig& a) -> std::vector<double>& { return a.exp.times; }));
        k.push_back(real_key("compare.window", "-", "compare on |x| <= window * t",
                             [](AppConfig& a) -> double& { return a.exp.window; },
                             [](double v) { return v > 0 && v < 1; }, "in (0, 1)"));
        k.push_back(real_key("compare.rel_rms_bound", "-", "acceptance bound on rel_rms at the last time",
                             [](AppConfig& a) -> double& { return a.exp.rel_rms_bound; }, pos, "> 0"));
        k.push_back(real_key("compare.audit_radius", "length", "support radius for the light-cone audit",
                             [](AppConfig& a) -> double& { return a.exp.audit_radius; }, nonneg, ">= 0"));
        k.push_back(real_key("compare.audit_threshold", "-", "max |u| allowed outside the light cone",
                             [](AppConfig& a) -> double& { return a.exp.audit_threshold; }, pos, "> 0"));
        {
            ConfigKey c;
            c.key = "output.dir";
            c.unit = "path";
            c.help = "output directory";
            c.set = [](AppConfig& a, const std::string& v) {
                if (v.empty()) throw ConfigError("output.dir: empty path");
                a.exp.output_dir = v;
            };
            c.get = [](const AppConfig& a) { return a.exp.output_dir; };
            k.push_back(c);
        }
        {
            ConfigKey c;
            c.key = "parallel.workers";
            c.unit = "threads";
            c.help = "worker threads for lambda and x sweeps (default: available cores)";
            c.set = [](AppConfig& a, const std::string& v) {
                const double x = num("parallel.workers", v);
                range("parallel.workers", x, x >= 1 && x == std::floor(x) && x <= 4096, "integer in [1, 4096]");
                a.exp.workers = static_cast<unsigned>(x);
            };
            c.get = [](const AppConfig& a) { return std::to_string(a.exp.workers); };
            k.push_back(c);
        }
        return k;
    }();
    return keys;
}

inline const ConfigKey* find_key(const std::string& key) {
    for (const auto& k : config_schema())
        if (k.key == key) return &k;
    return nullptr;
}

// Cross-key checks, run after every line has been applied.
inline void check_config(const AppConfig& c) {
    if (!(c.exp.grid.lambda_max > c.exp.grid.lambda_min))
        throw ConfigError("grid.lambda_max must exceed grid.lambda_min");
    if (c.exp.data.kind == DataKind::file && c.exp.data.file.empty())
        throw ConfigError("data.file is required when data.kind = file");
    if (c.exp.pde.L > 0 && c.exp.pde.L < c.exp.pde.t_max + c.exp.pde.support_radius + c.exp.pde.margin)
        throw ConfigError("pde.L must be at least pde.t_max + pde.support_radius + pde.margin");
    for (double t : c.asym_times)
        if (!(t > 0)) throw ConfigError("asym.times: every time must be positive");
    c.exp.check();
}

// `key = value` lines; '#' starts a comment. Unknown or repeated keys are errors.
inline AppConfig parse_config(std::istream& in) {
    AppConfig c;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", lineno);
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const ConfigKey* k = find_key(key);
        if (!k) throw ConfigError("unknown key '" + key + "'", lineno);
        if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", lineno);
        try {
            k->set(c, value);
        } catch (const ConfigError& e) {
            throw ConfigError(e.what(), lineno);
        }
    }
    check_config(c);
    return c;
}

inline AppConfig parse_config_string(const std::string& text) {
    std::istringstream is(text);
    return parse_config(is);
}

inline AppConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

// One line per key: `key = default  [unit]  help`.
inline std::string config_help() {
    AppConfig defaults;
    std::ostringstream os;
    os << "Configuration keys (key = default  [unit]  description):\n";
    for (const auto& k : config_schema())
        os << "  " << k.key << " = " << k.get(defaults) << "  [" << k.unit << "]  " << k.help << '\n';
    return os.str();
}

} // namespace tzitzeica
