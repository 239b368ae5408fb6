#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "csv.hpp"
#include "cubic_spline.hpp"
#include "errors.hpp"

namespace tzitzeica {

// Sampled Cauchy data (u0, u1) on a uniform grid, plus w = u0_x + u1.
// Off-grid values come from natural cubic splines; outside the grid the
// data are taken to be zero.
class InitialData {
public:
    InitialData() = default;

    InitialData(std::vector<double> x, std::vector<double> u0, std::vector<double> u1)
        : x_(std::move(x)), u0_(std::move(u0)), u1_(std::move(u1)) {
        const std::size_t n = x_.size();
        if (n < 16) throw DomainError("initial data: need at least 16 samples");
        if (u0_.size() != n || u1_.size() != n)
            throw DomainError("initial data: column length mismatch");
        dx_ = (x_.back() - x_.front()) / static_cast<double>(n - 1);
        if (!(dx_ > 0)) throw DomainError("initial data: grid must be increasing");
        for (std::size_t i = 0; i < n; ++i) {
            const double expect = x_.front() + dx_ * static_cast<double>(i);
            if (std::abs(x_[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
                throw DomainError("initial data: grid spacing not uniform");
            if (!std::isfinite(u0_[i]) || !std::isfinite(u1_[i]))
                throw DomainError("initial data: non-finite sample");
        }
        w_.resize(n);
        for (std::size_t i = 0; i < n; ++i) w_[i] = derivative_at(u0_, i) + u1_[i];
        su0_ = CubicSpline(x_, u0_);
        su1_ = CubicSpline(x_, u1_);
        sw_ = CubicSpline(x_, w_);
    }

    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& u0() const { return u0_; }
    const std::vector<double>& u1() const { return u1_; }
    const std::vector<double>& w() const { return w_; }
    double dx() const { return dx_; }
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    std::size_t size() const { return x_.size(); }

    double u0_at(double x) const { return inside(x) ? su0_(x) : 0.0; }
    double u1_at(double x) const { return inside(x) ? su1_(x) : 0.0; }
    double w_at(double x) const { return inside(x) ? sw_(x) : 0.0; }

    bool is_zero() const {
        for (std::size_t i = 0; i < x_.size(); ++i)
            if (u0_[i] != 0.0 || u1_[i] != 0.0) return false;
        return true;
    }

    // Schwartz truncation check at both endpoints.
    void check_tails(double tail_tol) const {
        for (std::size_t i : {std::size_t{0}, x_.size() - 1})
            if (std::abs(u0_[i]) >= tail_tol || std::abs(u1_[i]) >= tail_tol)
                throw DomainError("initial data: |u0| or |u1| exceeds tail_tol at x = " +
                                  format_number(x_[i]));
    }

    // Half-width X for the Jost integration: outermost |x| where
    // |u0| + |u1| >= threshold, plus margin, capped by the grid.
    double auto_truncation(double threshold = 1e-12, double margin = 2.0) const {
        double reach = 0.0;
        for (std::size_t i = 0; i < x_.size(); ++i)
            if (std::abs(u0_[i]) + std::abs(u1_[i]) >= threshold)
                reach = std::max(reach, std::abs(x_[i]));
        return std::min(reach + margin, std::min(-x_.front(), x_.back()));
    }

private:
    bool inside(double x) const { return x >= x_.front() && x <= x_.back(); }

    // fourth-order centered difference, second order one sample from the ends
    double derivative_at(const std::vector<double>& f, std::size_t i) const {
        const std::size_t n = f.size();
        if (i >= 2 && i + 2 < n)
            return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * dx_);
        if (i >= 1 && i + 1 < n) return (f[i + 1] - f[i - 1]) / (2.0 * dx_);
        if (i == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx_);
        return (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx_);
    }

    std::vector<double> x_, u0_, u1_, w_;
    double dx_ = 0.0;
    CubicSpline su0_, su1_, sw_;
};

inline InitialData sample_initial_data(const std::function<double(double)>& u0,
                                       const std::function<double(double)>& u1, double extent,
                                       double spacing) {
    if (!(extent > 0) || !(spacing > 0)) throw DomainError("sample_initial_data: bad extent/spacing");
    const auto n = static_cast<std::size_t>(std::llround(2.0 * extent / spacing)) + 1;
    std::vector<double> x(n), a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = -extent + 2.0 * extent * static_cast<double>(i) / static_cast<double>(n - 1);
        a[i] = u0(x[i]);
        b[i] = u1(x[i]);
    }
    return InitialData(std::move(x), std::move(a), std::move(b));
}

// u0 = amplitude * exp(-x^2 / (2 width^2)), u1 = 0
inline InitialData make_gaussian(double amplitude = -0.1, double width = 1.0, double extent = 12.0,
                                 double spacing = 0.01) {
    if (!(width > 0)) throw DomainError("gaussian width must be positive");
    return sample_initial_data(
        [=](double x) { return amplitude * std::exp(-x * x / (2.0 * width * width)); },
        [](double) { return 0.0; }, extent, spacing);
}

inline InitialData make_zero_data(double extent = 12.0, double spacing = 0.01) {
    return sample_initial_data([](double) { return 0.0; }, [](double) { return 0.0; }, extent,
                               spacing);
}

// CSV with header x,u0,u1
inline InitialData load_initial_data_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open initial data file: " + path);
    auto table = read_csv(in);
    if (table.header != std::vector<std::string>{"x", "u0", "u1"})
        throw DomainError("initial data file must have header x,u0,u1: " + path);
    std::vector<double> x, a, b;
    for (const auto& row : table.rows) {
        x.push_back(row[0]);
        a.push_back(row[1]);
        b.push_back(row[2]);
    }
    return InitialData(std::move(x), std::move(a), std::move(b));
}

} // namespace tzitzeica
