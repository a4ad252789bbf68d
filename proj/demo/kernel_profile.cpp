// F_n(l) against its short- and long-length asymptotics.

#include <cmath>
#include <cstdio>

#include <orthospectrum/f_function.hpp>

int main() {
    namespace os = orthospectrum;
    const os::QuadratureConfig cfg;

    for (int n = 3; n <= 5; ++n) {
        std::printf("n = %d   K_n = %.10f   large-l coefficient = %.10f\n", n, os::k_constant(n),
                    os::large_l_coefficient(n));
        std::printf("%8s %22s %14s %14s\n", "l", "F_n(l)", "l^{n-2} F_n", "e^{(n-1)l}F_n/l");
        for (double l : {1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
            const auto f = os::f_n_radial(n, os::OrthoLength(l), cfg);
            std::printf("%8g %22.15e %14.10f %14.10f\n", l, f.value, std::pow(l, n - 2) * f.value,
                        std::exp((n - 1) * l) / l * f.value);
        }
        std::printf("\n");
    }
    std::printf("F_2(l) = (4/pi) L(sech^2(l/2)):  F_2(1e-4) = %.12f   2 pi / 3 = %.12f\n", os::f2_closed(1e-4),
                2.0 * os::pi / 3.0);
}
