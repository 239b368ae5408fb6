#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "errors.hpp"
#include "matrix3.hpp"

namespace tzitzeica {

inline constexpr double sqrt3 = 1.7320508075688772935;

// omega = exp(2 pi i / 3)
inline const cplx omega{-0.5, 0.5 * sqrt3};
inline const cplx omega2{-0.5, -0.5 * sqrt3};

inline const Matrix3C J_matrix = Matrix3C::diag(omega, omega2, 1.0);
inline const Matrix3C J2_matrix = Matrix3C::diag(omega2, omega, 1.0);

// cyclic shift and transposition used by the Z3 / Z2 symmetries
inline const Matrix3C A_sym = Matrix3C({0, 1, 0, 0, 0, 1, 1, 0, 0});
inline const Matrix3C A_sym_inv = Matrix3C({0, 0, 1, 1, 0, 0, 0, 1, 0});
inline const Matrix3C B_sym = Matrix3C({0, 1, 0, 1, 0, 0, 0, 0, 1});

inline cplx omega_pow(int j) {
    switch (((j % 3) + 3) % 3) {
    case 0: return 1.0;
    case 1: return omega;
    default: return omega2;
    }
}

struct EigenExponents {
    std::array<cplx, 3> l; // spatial, index 0..2 <-> j = 1..3
    std::array<cplx, 3> z; // temporal
    cplx lambda;
};

inline void require_nonzero(cplx lambda) {
    if (lambda == cplx(0.0, 0.0))
        throw DomainError("spectral parameter at essential singularity (lambda = 0)");
}

inline EigenExponents eigen_exponents(cplx lambda) {
    require_nonzero(lambda);
    EigenExponents e{};
    e.lambda = lambda;
    for (int j = 1; j <= 3; ++j) {
        cplx k = omega_pow(j) * lambda;
        cplx kinv = 1.0 / k;
        e.l[j - 1] = 0.5 * (k + kinv);
        e.z[j - 1] = 0.5 * (k - kinv);
    }
    return e;
}

inline Matrix3C build_U0(double w) {
    const cplx c(0.0, sqrt3 * w / 6.0);
    return Matrix3C({0.0, c, -c, -c, 0.0, c, c, -c, 0.0});
}

inline Matrix3C build_U1(double u) {
    const double eu = std::exp(u), e2u = std::exp(-2.0 * u);
    const double a = 2.0 * eu + e2u, b = e2u - eu;
    Matrix3C m({omega2 * a, b, omega * b,
                b, omega * a, omega2 * b,
                omega * b, omega2 * b, a});
    return m / cplx(6.0);
}

// U1 - J^2/2, formed so that it is exactly zero at u = 0
inline Matrix3C build_U1_shifted(double u) {
    const double p = std::expm1(u), q = std::expm1(-2.0 * u);
    const double a = (2.0 * p + q) / 6.0, b = (q - p) / 6.0;
    return Matrix3C({omega2 * a, b, omega * b,
                     b, omega * a, omega2 * b,
                     omega * b, omega2 * b, a});
}

// L1 = U0 + (U1 - J^2/2) / lambda; vanishes for u = w = 0
inline Matrix3C build_L1(double u, double w, cplx lambda) {
    require_nonzero(lambda);
    return build_U1_shifted(u) / lambda + build_U0(w);
}

// full L = lambda J / 2 + U0 + U1 / lambda
inline Matrix3C build_L(double u, double w, cplx lambda) {
    require_nonzero(lambda);
    return J_matrix * (0.5 * lambda) + build_U0(w) + build_U1(u) * (1.0 / lambda);
}

inline Matrix3C gauge_G(double u) {
    const double eu = std::exp(u);
    const double pref = (1.0 + eu + eu * eu) / (3.0 * eu);
    const cplx p = omega * (eu - 1.0) / (eu - omega2);
    const cplx q = omega2 * (eu - 1.0) / (eu - omega);
    Matrix3C g({1.0, p, q,
                q, 1.0, p,
                p, q, 1.0});
    return g * cplx(pref);
}

// theta_21 = (l2 - l1) x + (z2 - z1) t
inline cplx phase_theta21(cplx lambda, double x, double t) {
    require_nonzero(lambda);
    const cplx inv = 1.0 / lambda;
    return 0.5 * (omega2 - omega) * ((lambda - inv) * x + (lambda + inv) * t);
}

inline double critical_lambda0(double x, double t) {
    if (!(t > 0.0)) throw DomainError("critical_lambda0: t must be positive");
    if (std::abs(x) == t)
        throw DomainError("light-cone boundary; lambda0 degenerates to 0 or infinity");
    return std::sqrt(std::abs(x - t) / std::abs(x + t));
}

enum class SectorLabel { I, II, III, IV };

inline const char* to_string(SectorLabel s) {
    switch (s) {
    case SectorLabel::I: return "I";
    case SectorLabel::II: return "II";
    case SectorLabel::III: return "III";
    default: return "IV";
    }
}

struct SectorThresholds {
    double inner = 0.85;
    double outer = 3.0;
};

inline SectorLabel classify_sector(double x, double t, double inner, double outer) {
    if (!(inner > 0.0 && inner < 1.0 && outer >= 1.0))
        throw DomainError("classify_sector: need 0 < inner < 1 <= outer");
    if (!(t > 0.0)) throw DomainError("classify_sector: t must be positive");
    const double r = std::abs(x / t);
    if (r <= inner) return SectorLabel::IV;
    if (r < 1.0) return SectorLabel::III;
    if (r <= outer) return SectorLabel::II;
    return SectorLabel::I;
}

inline SectorLabel classify_sector(double x, double t, const SectorThresholds& th = {}) {
    return classify_sector(x, t, th.inner, th.outer);
}

} // namespace tzitzeica
