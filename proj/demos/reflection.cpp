// Reflection coefficient of the Gaussian pulse and the asymptotic value at
// a few points of the light cone interior.

#include <tzitzeica/asymptotics.hpp>

#include <cstdio>

int main() {
    using namespace tzitzeica;
    const auto data = make_gaussian(-0.1, 1.0);
    GridSpec grid;
    grid.count = 120;
    const auto table = build_reflection_table(data, grid);

    for (double lam : {0.1, 0.5, 1.0, 2.0, 10.0}) {
        const cplx r = table.r(lam);
        std::printf("r1(%5.2f) = %+.6e %+.6ei   |r1| = %.3e\n", lam, r.real(), r.imag(), std::abs(r));
    }
    const double t = 40.0;
    for (double x : {0.0, 8.0, 16.0, 24.0, 32.0}) {
        AsymptoticParams p;
        const double u = leading_order_formula(x, t, table, {}, &p);
        std::printf("u(%4.1f, %4.1f) ~ %+.6e   lambda0 = %.4f  nu1 = %.3e\n", x, t, u, p.lambda0, p.nu1);
    }
}
