#include <gtest/gtest.h>

#include <tzitzeica/harness.hpp>

#include <filesystem>
#include <fstream>

using namespace tzitzeica;
namespace fs = std::filesystem;

namespace {

std::vector<TimeRecord> records_from(const std::vector<double>& t, const std::function<double(double)>& err) {
    std::vector<TimeRecord> r;
    for (double s : t) {
        TimeRecord rec;
        rec.t_requested = rec.t = s;
        rec.max_abs_err = err(s);
        r.push_back(rec);
    }
    return r;
}

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.grid.count = 100;
    c.pde.t_max = 20;
    c.times = {10, 15, 20};
    c.snapshot_times = {20};
    return c;
}

const ComparisonReport& reference_report() {
    static const ComparisonReport r = run_comparison(ExperimentConfig{});
    return r;
}

fs::path scratch_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("tz_harness_" + name);
    fs::remove_all(p);
    return p;
}

} // namespace

TEST(DecayFit, SyntheticLogOverT) {
    const auto f = fit_error_decay(records_from({20, 30, 40, 50}, [](double t) { return 2 * std::log(t) / t; }));
    EXPECT_NEAR(f.C, 2.0, 1e-10);
    // least-squares log-log slope of 2 ln t / t on these four times (30-digit reference)
    EXPECT_NEAR(f.exponent_check, -0.70808129319293960, 1e-12);
    EXPECT_TRUE(f.exponent_ok);
    EXPECT_TRUE(f.half_rejected);
    EXPECT_LT(f.resid_lnt, 1e-12);
    EXPECT_TRUE(f.pass);
}

TEST(DecayFit, InverseSquareRootIsRejected) {
    const auto f = fit_error_decay(records_from({20, 30, 40, 50}, [](double t) { return 0.3 / std::sqrt(t); }));
    EXPECT_NEAR(f.exponent_check, -0.5, 1e-12);
    EXPECT_FALSE(f.exponent_ok);
    EXPECT_FALSE(f.half_rejected);
    EXPECT_FALSE(f.pass);
}

TEST(DecayFit, ConstantErrorFails) {
    const auto f = fit_error_decay(records_from({20, 30, 40, 50}, [](double) { return 0.01; }));
    EXPECT_NEAR(f.exponent_check, 0.0, 1e-12);
    EXPECT_FALSE(f.pass);
}

TEST(DecayFit, InputErrors) {
    EXPECT_THROW(fit_error_decay(records_from({20}, [](double) { return 0.1; })), DomainError);
    EXPECT_THROW(fit_error_decay(records_from({20, 30, 30}, [](double) { return 0.1; })), DomainError);
    EXPECT_THROW(fit_error_decay(records_from({20, 30, 40}, [](double t) { return t < 35 ? 0.1 : 0.0; })),
                 DomainError);
}

TEST(LightCone, ZeroSnapshotsPass) {
    Snapshot s;
    s.t = 10;
    for (int i = -100; i <= 100; ++i) {
        s.x.push_back(0.5 * i);
        s.u.push_back(0.0);
    }
    const auto rep = light_cone_audit({s, s}, 10.0);
    EXPECT_TRUE(rep.pass);
    EXPECT_TRUE(std::isinf(rep.margin));
}

TEST(LightCone, InjectedBumpIsLocalised) {
    PdeConfig c;
    c.t_max = 10;
    auto st = init_state(c, [](double x) { return -0.1 * std::exp(-x * x / 2); }, [](double) { return 0.0; });
    auto run = run_until(st, 10.0, {5.0, 10.0});
    EXPECT_TRUE(light_cone_audit(run.snapshots, 10.0).pass);
    auto bad = run.snapshots;
    const std::size_t i = bad[1].x.size() - 40;
    bad[1].u[i] = 1e-3;
    const auto rep = light_cone_audit(bad, 10.0);
    EXPECT_FALSE(rep.pass);
    EXPECT_EQ(rep.records[1].x_at_sup, bad[1].x[i]);
    EXPECT_DOUBLE_EQ(rep.records[1].sup_outside, 1e-3);
}

TEST(LightCone, GrowthAboveFloorFails) {
    Snapshot a, b;
    a.t = 10;
    b.t = 20;
    for (int i = -200; i <= 200; ++i) {
        a.x.push_back(0.5 * i);
        b.x.push_back(0.5 * i);
        a.u.push_back(0.0);
        b.u.push_back(0.0);
    }
    a.u.back() = 1e-10;
    b.u.back() = 2e-10;
    const auto rep = light_cone_audit({a, b}, 10.0);
    EXPECT_FALSE(rep.shrinking);
    EXPECT_FALSE(rep.pass);
    // the same growth at the level of the data's own tail is ignored
    a.u.back() = 1e-30;
    b.u.back() = 2e-30;
    EXPECT_TRUE(light_cone_audit({a, b}, 10.0).pass);
}

TEST(Comparison, ZeroDataIsTrivial) {
    auto c = small_config();
    c.data.kind = DataKind::zero;
    const auto rep = run_comparison(c);
    EXPECT_TRUE(rep.trivial);
    EXPECT_TRUE(rep.pass);
    for (const auto& r : rep.records) {
        EXPECT_EQ(r.max_abs_err, 0.0);
        EXPECT_EQ(r.rms_signal, 0.0);
        EXPECT_EQ(r.rel_rms, 0.0);
    }
    EXPECT_FALSE(rep.fit_available);
}

TEST(Comparison, ReferenceConfiguration) {
    const auto& rep = reference_report();
    ASSERT_EQ(rep.records.size(), 4u);
    EXPECT_TRUE(std::is_sorted(rep.records.begin(), rep.records.end(),
                               [](const TimeRecord& a, const TimeRecord& b) { return a.t < b.t; }));
    EXPECT_LT(rep.records.back().max_abs_err, rep.records.front().max_abs_err);
    // frozen regression bound, measured 0.0214 at t = 50
    EXPECT_LT(rep.records.back().rel_rms, 0.03);
    EXPECT_TRUE(rep.fit_available);
    EXPECT_TRUE(rep.fit.exponent_ok) << rep.fit.exponent_check;
    EXPECT_TRUE(rep.fit.half_rejected);
    EXPECT_TRUE(rep.cone.pass);
    EXPECT_GE(rep.cone.margin, 100.0);
    EXPECT_LT(rep.energy_drift, 1e-6);
    EXPECT_TRUE(rep.pass);
    for (const auto& r : rep.records) {
        EXPECT_GE(r.max_abs_err, 0.0);
        EXPECT_GE(r.rms_err, 0.0);
        EXPECT_LE(std::abs(r.t - r.t_requested), 0.5 * 0.018 + 1e-12);
    }
}

TEST(Comparison, WindowStaysInSectorFour) {
    const auto& rep = reference_report();
    for (const auto& ov : rep.overlays) {
        ASSERT_FALSE(ov.x.empty());
        for (double x : ov.x) {
            EXPECT_LE(std::abs(x), 0.8 * ov.t_requested);
            EXPECT_EQ(classify_sector(x, ov.t), SectorLabel::IV);
        }
    }
}

TEST(Comparison, Deterministic) {
    const auto c = small_config();
    const auto a = run_comparison(c);
    const auto b = run_comparison(c);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        EXPECT_EQ(a.records[i].max_abs_err, b.records[i].max_abs_err);
        EXPECT_EQ(a.records[i].rms_err, b.records[i].rms_err);
        EXPECT_EQ(a.records[i].rms_signal, b.records[i].rms_signal);
    }
    EXPECT_EQ(a.fit.C, b.fit.C);
    EXPECT_EQ(a.fit.exponent_check, b.fit.exponent_check);
    for (std::size_t i = 0; i < a.overlays.size(); ++i) EXPECT_EQ(a.overlays[i].u_asymptotic, b.overlays[i].u_asymptotic);
    // worker count does not change the numbers
    auto c1 = c;
    c1.workers = 1;
    const auto d = run_comparison(c1);
    EXPECT_EQ(d.records.back().max_abs_err, a.records.back().max_abs_err);
}

TEST(Comparison, SamplesFileGivesSameResultAsBuiltIn) {
    const auto dir = scratch_dir("file");
    fs::create_directories(dir);
    const auto g = make_gaussian();
    {
        std::ofstream os(dir / "data.csv");
        CsvWriter w(os, {"x", "u0", "u1"});
        for (std::size_t i = 0; i < g.size(); ++i) w.row(g.x()[i], g.u0()[i], g.u1()[i]);
    }
    auto c = small_config();
    const auto builtin = prepare_pipeline(c);
    c.data.kind = DataKind::file;
    c.data.file = (dir / "data.csv").string();
    const auto loaded = prepare_pipeline(c);
    EXPECT_EQ(loaded.data.u0(), builtin.data.u0());
    EXPECT_EQ(loaded.data.w(), builtin.data.w());
    const auto a = all_samples(builtin.table), b = all_samples(loaded.table);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].r, b[i].r);
    // the PDE consumes the same samples as the scattering stage
    auto st = init_state(c.pde, [&](double x) { return loaded.data.u0_at(x); }, [&](double x) { return loaded.data.u1_at(x); });
    for (std::size_t i = 0; i < st.size(); i += 97) EXPECT_EQ(st.u[i], i == 0 || i + 1 == st.size() ? 0.0 : loaded.data.u0_at(st.x[i]));
}

TEST(Comparison, StageErrorsNameTheStage) {
    auto c = small_config();
    c.data.kind = DataKind::file;
    c.data.file = "/nonexistent/data.csv";
    try {
        prepare_pipeline(c);
        FAIL();
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "initial-data");
    }
    c = small_config();
    c.data.width = 4.0; // tails exceed tail_tol at the sampled edge
    try {
        prepare_pipeline(c);
        FAIL();
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "initial-data");
        EXPECT_TRUE(e.numeric());
    }
    c = small_config();
    c.pde.cfl = 1.5;
    try {
        run_comparison(c);
        FAIL();
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "pde-init");
    }
    c = small_config();
    c.times = {10, 25};
    EXPECT_THROW(run_comparison(c), ConfigError);
    c = small_config();
    c.window = 0.9;
    EXPECT_THROW(c.check(), ConfigError);
}

TEST(Comparison, OutputFilesRoundTrip) {
    const auto& rep = reference_report();
    const auto dir = scratch_dir("out");
    write_comparison_outputs(rep, dir);
    std::ifstream rin(dir / "report.csv");
    const auto report = read_csv(rin);
    EXPECT_EQ(report.header, (std::vector<std::string>{"t", "max_abs_err", "rms_err", "rms_signal", "rel_rms"}));
    ASSERT_EQ(report.rows.size(), rep.records.size());
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
        EXPECT_EQ(report.rows[i][0], rep.records[i].t);
        EXPECT_EQ(report.rows[i][1], rep.records[i].max_abs_err);
        EXPECT_EQ(report.rows[i][4], rep.records[i].rel_rms);
    }
    std::ifstream fin(dir / "fit.csv");
    const auto fit = read_csv(fin);
    EXPECT_EQ(fit.rows.at(0)[0], rep.fit.C);
    EXPECT_EQ(fit.rows.at(0)[1], rep.fit.exponent_check);
    for (double t : {20.0, 30.0, 40.0, 50.0}) {
        std::ifstream oin(dir / overlay_filename(t));
        ASSERT_TRUE(oin) << overlay_filename(t);
        const auto ov = read_csv(oin);
        EXPECT_EQ(ov.header, (std::vector<std::string>{"x", "u_numeric", "u_asymptotic", "abs_err"}));
        EXPECT_GT(ov.rows.size(), 100u);
    }
    EXPECT_EQ(overlay_filename(20), "overlay_t20.csv");
    fs::remove_all(dir);
}
