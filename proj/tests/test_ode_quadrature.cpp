#include <gtest/gtest.h>

#include <tzitzeica/csv.hpp>
#include <tzitzeica/cubic_spline.hpp>
#include <tzitzeica/initial_data.hpp>
#include <tzitzeica/ode.hpp>
#include <tzitzeica/parallel.hpp>
#include <tzitzeica/quadrature.hpp>

#include "support/oracles.hpp"

#include <atomic>
#include <sstream>

using namespace tzitzeica;
using C = std::complex<double>;

TEST(Dopri5, ExponentialGrowthForwardAndBackward) {
    auto rhs = [](double, const CVec<1>& y, CVec<1>& d) { d[0] = C(0.3, 2.0) * y[0]; };
    OdeOptions opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-12;
    auto y = integrate_dopri5<1>(rhs, 0.0, 5.0, {C(1.0)}, opt);
    EXPECT_LT(std::abs(y[0] - std::exp(C(0.3, 2.0) * 5.0)), 1e-9);
    auto back = integrate_dopri5<1>(rhs, 5.0, 0.0, y, opt);
    EXPECT_LT(std::abs(back[0] - 1.0), 1e-9);
}

TEST(Dopri5, AgreesWithRk4OnRotation) {
    auto rhs = [](double x, const CVec<2>& y, CVec<2>& d) {
        d[0] = y[1] * (1.0 + 0.1 * std::sin(x));
        d[1] = -y[0] * (1.0 + 0.1 * std::sin(x));
    };
    OdeOptions opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-12;
    const CVec<2> y0{C(1.0), C(0.0, 1.0)};
    auto a = integrate_dopri5<2>(rhs, 0.0, 10.0, y0, opt);
    auto b = integrate_rk4<2>(rhs, 0.0, 10.0, y0, 20000);
    EXPECT_LT(std::abs(a[0] - b[0]), 1e-9);
    EXPECT_LT(std::abs(a[1] - b[1]), 1e-9);
    // phase-space invariant |y0|^2 + |y1|^2
    EXPECT_NEAR(std::norm(a[0]) + std::norm(a[1]), 2.0, 1e-9);
}

TEST(Dopri5, BlowupRaisesIntegrationError) {
    auto rhs = [](double, const CVec<1>& y, CVec<1>& d) { d[0] = y[0] * y[0]; };
    try {
        integrate_dopri5<1>(rhs, 0.0, 2.0, {C(1.0)}, OdeOptions{}, 4.5);
        FAIL() << "expected IntegrationError";
    } catch (const IntegrationError& e) {
        EXPECT_EQ(e.lambda(), 4.5);
    }
}

TEST(Dopri5, Rk4ConvergesAtFourthOrder) {
    auto rhs = [](double x, const CVec<1>& y, CVec<1>& d) { d[0] = std::cos(x) * y[0]; };
    const C exact = std::exp(std::sin(3.0));
    const double e1 = std::abs(integrate_rk4<1>(rhs, 0.0, 3.0, {C(1.0)}, 50)[0] - exact);
    const double e2 = std::abs(integrate_rk4<1>(rhs, 0.0, 3.0, {C(1.0)}, 100)[0] - exact);
    EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.2);
    EXPECT_THROW((integrate_rk4<1>(rhs, 0.0, 1.0, {C(1.0)}, 0)), DomainError);
}

TEST(Quadrature, SmoothIntegrand) {
    const auto r = integrate_gk([](double x) { return std::exp(x) * std::cos(x); }, 0.0, 2.0);
    const double exact = 0.5 * (std::exp(2.0) * (std::cos(2.0) + std::sin(2.0)) - 1.0);
    EXPECT_NEAR(r.value, exact, 1e-13);
}

TEST(Quadrature, LogEndpointSingularity) {
    const auto r = integrate_gk([](double x) { return std::log(x); }, 0.0, 1.0, 1e-13, 1e-12);
    EXPECT_NEAR(r.value, -1.0, 1e-11);
    const auto s = integrate_gk([](double x) { return std::log(std::abs(x - 0.3)); }, 0.0, 0.3, 1e-13, 1e-12);
    EXPECT_NEAR(s.value, 0.3 * std::log(0.3) - 0.3, 1e-11);
}

TEST(Quadrature, ReversedLimitsFlipSign) {
    auto f = [](double x) { return x * x; };
    EXPECT_NEAR(integrate_gk(f, 2.0, 0.0).value, -8.0 / 3.0, 1e-13);
    EXPECT_EQ(integrate_gk(f, 1.0, 1.0).value, 0.0);
}

TEST(Quadrature, AgreesWithTanhSinhOracle) {
    auto f = [](double s) { return std::log(std::abs(s - 0.7) / std::abs(s + 0.4)) * s * std::exp(-s * s); };
    const double a = integrate_gk(f, 0.0, 0.7, 1e-14, 1e-12).value;
    const double b = oracle::tanh_sinh(f, 0.0, 0.7);
    EXPECT_NEAR(a, b, 1e-11);
}

TEST(CubicSpline, ReproducesLinearExactly) {
    std::vector<double> x, y;
    for (int i = 0; i < 11; ++i) {
        x.push_back(0.3 * i);
        y.push_back(2.0 - 1.5 * x.back());
    }
    CubicSpline s(x, y);
    for (double t = 0; t <= 3.0; t += 0.037) {
        EXPECT_NEAR(s(t), 2.0 - 1.5 * t, 1e-13);
        EXPECT_NEAR(s.derivative(t), -1.5, 1e-12);
    }
}

TEST(CubicSpline, ConvergesFourthOrderInInterior) {
    auto err = [](int n) {
        std::vector<double> x, y;
        for (int i = 0; i <= n; ++i) {
            x.push_back(-3.0 + 6.0 * i / n);
            y.push_back(std::exp(-x.back() * x.back()));
        }
        CubicSpline s(x, y);
        double e = 0;
        for (double t = -1.0; t <= 1.0; t += 0.01) e = std::max(e, std::abs(s(t) - std::exp(-t * t)));
        return e;
    };
    EXPECT_GT(std::log2(err(60) / err(120)), 3.5);
}

TEST(CubicSpline, RejectsBadInput) {
    EXPECT_THROW(CubicSpline({0.0, 1.0}, {0.0, 1.0}), DomainError);
    EXPECT_THROW(CubicSpline({0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}), DomainError);
}

TEST(InitialData, GaussianSamplesAndDerivative) {
    const auto d = make_gaussian();
    EXPECT_NEAR(d.u0_at(0.0), -0.1, 1e-15);
    for (double x : {-2.3, -0.71, 0.0, 0.4, 1.9})
        EXPECT_NEAR(d.w_at(x), oracle::gauss_w(x), 1e-9) << "x = " << x;
    EXPECT_EQ(d.u0_at(13.0), 0.0);
    EXPECT_FALSE(d.is_zero());
    EXPECT_TRUE(make_zero_data().is_zero());
}

TEST(InitialData, TruncationAndTails) {
    const auto d = make_gaussian();
    const double X = d.auto_truncation();
    // |u0| < 1e-12 beyond sqrt(2 ln 1e11) ~ 7.11, plus margin 2
    EXPECT_NEAR(X, 9.11, 0.02);
    EXPECT_NO_THROW(d.check_tails(1e-10));
    const auto wide = make_gaussian(-0.1, 4.0, 12.0, 0.01);
    EXPECT_THROW(wide.check_tails(1e-10), DomainError);
}

TEST(InitialData, RejectsNonUniformGrid) {
    std::vector<double> x(20), z(20, 0.0);
    for (int i = 0; i < 20; ++i) x[i] = i * 0.1 + (i == 7 ? 0.01 : 0.0);
    EXPECT_THROW(InitialData(x, z, z), DomainError);
    EXPECT_THROW(InitialData({0.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}), DomainError);
}

TEST(Csv, NumberRoundTrip) {
    for (double v : {0.0, -1.5, 1e-300, 3.141592653589793, -2.718281828459045e17, 0.1 + 0.2})
        EXPECT_EQ(parse_number(format_number(v)), v);
    EXPECT_THROW(parse_number("abc"), DomainError);
}

TEST(Csv, WriteThenRead) {
    std::stringstream ss;
    {
        CsvWriter w(ss, {"a", "b", "c"});
        w.row(1.25, 2, std::size_t{3});
        w.row(-0.5, 7, std::size_t{0});
    }
    const auto t = read_csv(ss);
    ASSERT_EQ(t.header, (std::vector<std::string>{"a", "b", "c"}));
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0][0], 1.25);
    EXPECT_EQ(t.rows[1][1], 7.0);
}

TEST(Parallel, CoversEveryIndexOnce) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, PropagatesExceptions) {
    EXPECT_THROW(parallel_for(100, 3, [](std::size_t i) {
                     if (i == 57) throw DomainError("boom");
                 }),
                 DomainError);
}
