// Boundary-area volume bounds: where F_n(2x) meets A S_n(x).

#include <cstdio>

#include <orthospectrum/bounds.hpp>

int main() {
    namespace os = orthospectrum;
    const os::QuadratureConfig cfg;

    const auto r = os::volume_bound(3, 4.0 * os::pi, cfg);
    std::printf("n = 3, A = 4 pi: x* = %.6f  H = %.6f  power-law floor = %.6f\n", r.x_star, r.H, r.power_floor);

    std::printf("\n%4s %10s %14s %14s\n", "n", "A", "H_n(A)", "floor");
    for (int n = 3; n <= 5; ++n)
        for (double area : {1.0, 10.0, 100.0, 1000.0}) {
            const auto b = os::volume_bound(n, area, cfg);
            std::printf("%4d %10g %14.8f %14.8f\n", n, area, b.H, b.power_floor);
        }
}
