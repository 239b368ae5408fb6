#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "errors.hpp"

namespace tzitzeica {

using cplx = std::complex<double>;

// Dense 3x3 complex matrix, row-major.
struct Matrix3C {
    std::array<cplx, 9> a{};

    constexpr Matrix3C() = default;
    constexpr explicit Matrix3C(const std::array<cplx, 9>& e) : a(e) {}

    static constexpr Matrix3C zero() { return Matrix3C{}; }
    static constexpr Matrix3C identity() {
        Matrix3C m;
        m.a[0] = m.a[4] = m.a[8] = 1.0;
        return m;
    }
    static constexpr Matrix3C diag(cplx d0, cplx d1, cplx d2) {
        Matrix3C m;
        m.a[0] = d0;
        m.a[4] = d1;
        m.a[8] = d2;
        return m;
    }

    // zero-based indices
    constexpr cplx& operator()(int i, int j) { return a[3 * i + j]; }
    constexpr const cplx& operator()(int i, int j) const { return a[3 * i + j]; }

    Matrix3C& operator+=(const Matrix3C& o) {
        for (int k = 0; k < 9; ++k) a[k] += o.a[k];
        return *this;
    }
    Matrix3C& operator-=(const Matrix3C& o) {
        for (int k = 0; k < 9; ++k) a[k] -= o.a[k];
        return *this;
    }
    Matrix3C& operator*=(cplx s) {
        for (auto& v : a) v *= s;
        return *this;
    }

    bool is_finite() const {
        for (const auto& v : a)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    cplx det() const {
        const auto& m = *this;
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }

    // (i,j) cofactor
    cplx cofactor(int i, int j) const {
        int r0 = i == 0 ? 1 : 0, r1 = i == 2 ? 1 : 2;
        int c0 = j == 0 ? 1 : 0, c1 = j == 2 ? 1 : 2;
        cplx minor = (*this)(r0, c0) * (*this)(r1, c1) - (*this)(r0, c1) * (*this)(r1, c0);
        return ((i + j) % 2 == 0) ? minor : -minor;
    }

    Matrix3C transpose() const {
        Matrix3C t;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
        return t;
    }

    Matrix3C conj() const {
        Matrix3C t;
        for (int k = 0; k < 9; ++k) t.a[k] = std::conj(a[k]);
        return t;
    }

    Matrix3C inverse() const {
        cplx d = det();
        if (std::abs(d) == 0.0) throw DomainError("singular 3x3 matrix");
        Matrix3C inv;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) inv(i, j) = cofactor(j, i) / d;
        return inv;
    }

    // cofactor matrix (M^{-1})^T
    Matrix3C cofactor_matrix() const { return inverse().transpose(); }

    double max_abs() const {
        double m = 0;
        for (const auto& v : a) m = std::max(m, std::abs(v));
        return m;
    }
};

inline Matrix3C operator+(Matrix3C l, const Matrix3C& r) { return l += r; }
inline Matrix3C operator-(Matrix3C l, const Matrix3C& r) { return l -= r; }
inline Matrix3C operator*(Matrix3C m, cplx s) { return m *= s; }
inline Matrix3C operator*(cplx s, Matrix3C m) { return m *= s; }
inline Matrix3C operator/(Matrix3C m, cplx s) { return m *= (1.0 / s); }

inline Matrix3C operator*(const Matrix3C& l, const Matrix3C& r) {
    Matrix3C p;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            cplx acc = 0;
            for (int k = 0; k < 3; ++k) acc += l(i, k) * r(k, j);
            p(i, j) = acc;
        }
    return p;
}

inline std::array<cplx, 3> operator*(const std::array<cplx, 3>& row, const Matrix3C& m) {
    std::array<cplx, 3> out{};
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) out[j] += row[k] * m(k, j);
    return out;
}

// max-abs entry of the difference
inline double distance(const Matrix3C& l, const Matrix3C& r) { return (l - r).max_abs(); }

} // namespace tzitzeica
