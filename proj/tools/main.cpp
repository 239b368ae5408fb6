// Command-line front end: scatter | evolve | asymptotics | compare | validate
//
// Exit codes: 0 success, 1 configuration error, 2 numeric or runtime
// failure, 3 validation failure.

#include <CLI11.hpp>

#include <tzitzeica/asymptotics.hpp>
#include <tzitzeica/config.hpp>
#include <tzitzeica/harness.hpp>
#include <tzitzeica/pde.hpp>
#include <tzitzeica/scattering.hpp>
#include <tzitzeica/validation.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace fs = std::filesystem;
using namespace tzitzeica;

namespace {

enum Exit { ok = 0, config_error = 1, numeric_failure = 2, validation_failure = 3 };

struct Options {
    std::string command;
    std::string config_path;
    std::string output_dir;
    int verbosity = 0;
};

void note(const Options& o, const std::string& msg) {
    if (o.verbosity > 0) std::cerr << "[tzitzeica] " << msg << '\n';
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    return os;
}

int cmd_scatter(const Options& o, const AppConfig& cfg) {
    const auto prod = prepare_pipeline(cfg.exp);
    const fs::path dir = cfg.exp.output_dir;
    fs::create_directories(dir);
    auto os = open_out(dir / "reflection_table.csv");
    prod.table.write_csv(os);
    const auto rep = validate_scattering(all_samples(prod.table), cfg.validation);
    std::cout << "reflection table: " << 2 * cfg.exp.grid.count << " samples, max |r| = "
              << format_number(prod.table.max_abs_r()) << ", max det residual = "
              << format_number(rep.max_det_residual) << ", max sym residual = "
              << format_number(rep.max_sym_residual) << '\n';
    note(o, "wrote " + (dir / "reflection_table.csv").string());
    return ok;
}

int cmd_evolve(const Options& o, const AppConfig& cfg) {
    const auto data = run_stage("initial-data", [&] {
        auto d = make_initial_data(cfg.exp.data);
        d.check_tails(cfg.exp.tail_tol);
        return d;
    });
    auto st = run_stage("pde-init", [&] {
        return init_state(cfg.exp.pde, [&](double x) { return data.u0_at(x); },
                          [&](double x) { return data.u1_at(x); });
    });
    note(o, "grid points: " + std::to_string(st.size()) + ", dt = " + format_number(st.dt));
    auto run = run_stage("pde", [&] { return run_until(st, cfg.exp.pde.t_max, cfg.exp.snapshot_times); });
    const fs::path dir = cfg.exp.output_dir;
    fs::create_directories(dir);
    for (const auto& s : run.snapshots) {
        auto os = open_out(dir / snapshot_filename(s.t_requested));
        write_snapshot_csv(os, s);
        std::cout << "snapshot t = " << format_number(s.t) << " -> " << snapshot_filename(s.t_requested) << '\n';
    }
    const auto e = energy(st);
    std::cout << "final t = " << format_number(e.t) << ", energy = " << format_number(e.energy)
              << ", relative drift = " << format_number(e.drift_rel) << '\n';
    return ok;
}

int cmd_asymptotics(const Options& o, const AppConfig& cfg) {
    const auto prod = prepare_pipeline(cfg.exp);
    std::vector<double> xs, ts, us;
    for (double t : cfg.asym_times) {
        std::vector<double> x(cfg.asym_x_count);
        const double half = cfg.asym_x_factor * t;
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = -half + 2.0 * half * static_cast<double>(i) / static_cast<double>(x.size() - 1);
        auto u = run_stage("asymptotics", [&] { return u_asymptotic_curve(x, t, prod.table, cfg.exp.asym, cfg.exp.workers); });
        xs.insert(xs.end(), x.begin(), x.end());
        ts.insert(ts.end(), x.size(), t);
        us.insert(us.end(), u.begin(), u.end());
        note(o, "curve at t = " + format_number(t) + " done");
    }
    const fs::path dir = cfg.exp.output_dir;
    fs::create_directories(dir);
    auto os = open_out(dir / "asymptotic_curves.csv");
    write_asymptotic_csv(os, xs, ts, us, cfg.exp.asym);
    std::cout << "wrote " << xs.size() << " rows to " << (dir / "asymptotic_curves.csv").string() << '\n';
    return ok;
}

int cmd_compare(const Options& o, const AppConfig& cfg) {
    note(o, "building reflection table");
    const auto prod = prepare_pipeline(cfg.exp);
    note(o, "evolving and comparing");
    const auto rep = run_comparison(cfg.exp, prod);
    write_comparison_outputs(rep, cfg.exp.output_dir);
    for (const auto& r : rep.records)
        std::cout << "t = " << format_number(r.t) << "  max_abs_err = " << format_number(r.max_abs_err)
                  << "  rel_rms = " << format_number(r.rel_rms) << '\n';
    if (rep.fit_available)
        std::cout << "fit: C = " << format_number(rep.fit.C) << ", exponent = " << format_number(rep.fit.exponent_check)
                  << '\n';
    std::cout << (rep.pass ? "PASS" : "FAIL") << '\n';
    return rep.pass ? ok : validation_failure;
}

int cmd_validate(const Options&, const AppConfig& cfg) {
    bool all = true;
    for (const auto& c : run_validation_suite(cfg)) {
        std::cout << (c.pass ? "PASS  " : "FAIL  ") << c.name << ": " << c.detail << '\n';
        all = all && c.pass;
    }
    return all ? ok : validation_failure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Forward scattering, long-time asymptotics and PDE comparison for u_tt - u_xx = e^{-2u} - e^u"};
    app.footer("\nExit codes: 0 success, 1 configuration error, 2 numeric failure, 3 validation failure\n\n" +
               config_help());
    app.require_subcommand(1, 1);
    Options o;
    const char* descr[][2] = {{"scatter", "compute the reflection table -> reflection_table.csv"},
                              {"evolve", "run the PDE solver -> field_t{time}.csv"},
                              {"asymptotics", "evaluate the asymptotic waveform -> asymptotic_curves.csv"},
                              {"compare", "full comparison -> report.csv, fit.csv, overlay_t{time}.csv"},
                              {"validate", "run the invariant suites; exit 3 on any failure"}};
    for (auto& d : descr) {
        auto* sub = app.add_subcommand(d[0], d[1]);
        sub->add_option("-c,--config", o.config_path, "configuration file (key = value lines)");
        sub->add_option("-o,--output", o.output_dir, "output directory (overrides output.dir)");
        sub->add_flag("-v,--verbose", o.verbosity, "progress messages on stderr");
        sub->callback([&o, name = std::string(d[0])] { o.command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help lands here too, with exit code 0
        return app.exit(e) == 0 ? ok : config_error;
    }

    AppConfig cfg;
    try {
        cfg = o.config_path.empty() ? parse_config_string("") : parse_config_file(o.config_path);
        if (!o.output_dir.empty()) cfg.exp.output_dir = o.output_dir;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return config_error;
    }

    try {
        if (o.command == "scatter") return cmd_scatter(o, cfg);
        if (o.command == "evolve") return cmd_evolve(o, cfg);
        if (o.command == "asymptotics") return cmd_asymptotics(o, cfg);
        if (o.command == "compare") return cmd_compare(o, cfg);
        return cmd_validate(o, cfg);
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.numeric() ? numeric_failure : config_error;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return numeric_failure;
    } catch (...) {
        std::cerr << "error: unknown failure\n";
        return numeric_failure;
    }
}
