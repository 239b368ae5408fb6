#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace tzitzeica {

// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
public:
    CubicSpline() = default;

    CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 3 || y_.size() != n) throw DomainError("CubicSpline: need >= 3 matching samples");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1])) throw DomainError("CubicSpline: abscissae not increasing");
        // tridiagonal solve for second derivatives, natural ends
        m_.assign(n, 0.0);
        std::vector<double> c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            const double a = h0, b = 2.0 * (h0 + h1), cc = h1;
            const double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
            const double denom = b - a * c[i - 1];
            c[i] = cc / denom;
            d[i] = (rhs - a * d[i - 1]) / denom;
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = d[i] - c[i] * m_[i + 1];
            if (i == 1) break;
        }
    }

    bool empty() const { return x_.empty(); }
    double front() const { return x_.front(); }
    double back() const { return x_.back(); }
    const std::vector<double>& knots() const { return x_; }

    double operator()(double x) const { return eval(x, nullptr); }
    double derivative(double x) const {
        double d = 0;
        eval(x, &d);
        return d;
    }

    // value and first derivative; extrapolates with the end cubic
    double eval(double x, double* dydx) const {
        const std::size_t i = segment(x);
        const double h = x_[i + 1] - x_[i];
        const double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
        const double v = A * y_[i] + B * y_[i + 1] +
                         ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
        if (dydx)
            *dydx = (y_[i + 1] - y_[i]) / h -
                    (3.0 * A * A - 1.0) / 6.0 * h * m_[i] + (3.0 * B * B - 1.0) / 6.0 * h * m_[i + 1];
        return v;
    }

private:
    std::size_t segment(double x) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        return std::min(i, x_.size() - 2);
    }

    std::vector<double> x_, y_, m_;
};

} // namespace tzitzeica
