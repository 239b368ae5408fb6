#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "errors.hpp"

namespace tzitzeica {

namespace detail {

// Lanczos g = 7, n = 9
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_c = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline std::complex<double> log_gamma_right(std::complex<double> z) {
    // valid for Re z >= 1/2
    z -= 1.0;
    std::complex<double> x = lanczos_c[0];
    for (int i = 1; i < 9; ++i) x += lanczos_c[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// log sin(pi z) without overflow for large |Im z|
inline std::complex<double> log_sin_pi(std::complex<double> z) {
    const double y = z.imag();
    if (std::abs(y) < 20.0) return std::log(std::sin(std::numbers::pi * z));
    // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i; keep the dominant exponential
    const std::complex<double> I(0, 1);
    if (y > 0) {
        const std::complex<double> e = std::exp(2.0 * I * std::numbers::pi * z); // small
        return -I * std::numbers::pi * z + std::log((1.0 - e) / (2.0 * I) * -1.0);
    }
    const std::complex<double> e = std::exp(-2.0 * I * std::numbers::pi * z); // small
    return I * std::numbers::pi * z + std::log((1.0 - e) / (2.0 * I));
}

inline double wrap_pi(double a) {
    a = std::remainder(a, 2.0 * std::numbers::pi);
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
}

} // namespace detail

// Principal logarithm of Gamma(z): real part ln|Gamma(z)|, imaginary part
// arg Gamma(z) in (-pi, pi].
inline std::complex<double> log_gamma_complex(std::complex<double> z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("log_gamma_complex: non-finite argument");
    if (z.real() <= 0.5) {
        const double n = std::round(-z.real());
        if (n >= 0 && std::abs(z + n) < 1e-12)
            throw DomainError("log_gamma_complex: argument within 1e-12 of a pole of Gamma");
    }
    std::complex<double> v;
    if (z.real() >= 0.5) {
        v = detail::log_gamma_right(z);
    } else {
        // reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        v = std::log(std::numbers::pi) - detail::log_sin_pi(z) - detail::log_gamma_right(1.0 - z);
    }
    return {v.real(), detail::wrap_pi(v.imag())};
}

inline double arg_gamma(std::complex<double> z) { return log_gamma_complex(z).imag(); }

} // namespace tzitzeica
