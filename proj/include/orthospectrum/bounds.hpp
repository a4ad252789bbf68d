#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "f_function.hpp"
#include "quadrature.hpp"

namespace orthospectrum {

/// Crossing of F_n(2x) with A S_n(x).
struct BoundResult {
    double x_star;       // collar half-width at the crossing
    double H;            // common value F_n(2 x_star) = A S_n(x_star)
    double power_floor;  // (K_n A / 2)^{(n-2)/(n-1)}
};

/// Raised when volume_bound cannot enclose the crossing point.
class BracketingFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// S_n(r) = int_0^r cosh^{n-1}(x) dx, from the binomial expansion of cosh^{n-1}:
/// 2^{-m} [ sum_{k < m/2} 2 C(m,k) sinh((m-2k) r) / (m-2k) + (m even) C(m, m/2) r ], m = n-1.
inline double collar_volume_factor(int n, double r) {
    if (n < 2) throw std::domain_error("collar_volume_factor: requires n >= 2");
    if (!(r >= 0.0)) throw std::domain_error("collar_volume_factor: requires r >= 0");
    const int m = n - 1;
    double binom = 1.0;  // C(m, k)
    double sum = 0.0;
    for (int k = 0; 2 * k < m; ++k) {
        const int freq = m - 2 * k;
        sum += 2.0 * binom * std::sinh(freq * r) / freq;
        binom = binom * (m - k) / (k + 1);
    }
    if (m % 2 == 0) sum += binom * r;
    return std::ldexp(sum, -m);
}

/// (K_n A / 2)^{(n-2)/(n-1)}, the small-x approximation to H_n(A).
inline double power_law_floor(int n, double area) {
    if (n < 3) throw std::domain_error("power_law_floor: requires n >= 3");
    if (!(area > 0.0)) throw std::domain_error("power_law_floor: boundary area must be > 0");
    return std::pow(k_constant(n) * area / 2.0, (n - 2.0) / (n - 1.0));
}

/// Volume lower bound F_n(l) from a shortest orthogeodesic of length l.
inline double shortest_ortho_bound(int n, double l, const QuadratureConfig& cfg) {
    if (n < 3) throw std::domain_error("shortest_ortho_bound: requires n >= 3");
    return f_n_radial(n, OrthoLength(l), cfg).value;
}

/// H_n(A): the value where the decreasing F_n(2x) meets the increasing A S_n(x).
///
/// J(x) = F_n(2x) / S_n(x) decreases from infinity to 0, so the crossing
/// J(x) = A is unique. The bracket starts at [1/64, 1] and grows geometrically
/// (down to 1e-8, up to 64); it is then bisected in log x. Bisection rather
/// than a secant method, because F_n is only known to quadrature accuracy.
inline BoundResult volume_bound(int n, double area, const QuadratureConfig& cfg) {
    if (n < 3) throw std::domain_error("volume_bound: requires n >= 3");
    if (!(area > 0.0) || !std::isfinite(area)) throw std::domain_error("volume_bound: boundary area must be > 0");
    cfg.validate();

    auto excess = [&](double x) {
        const double f = f_n_radial(n, OrthoLength(2.0 * x), cfg).value;
        return std::log(f) - std::log(area * collar_volume_factor(n, x));
    };

    double lo = 1.0 / 64.0;
    double hi = 1.0;
    double g_lo = excess(lo);
    double g_hi = excess(hi);
    while (g_lo <= 0.0) {
        hi = lo;
        g_hi = g_lo;
        lo /= 8.0;
        if (lo < 1e-8) throw BracketingFailure("volume_bound: crossing below x = 1e-8");
        g_lo = excess(lo);
    }
    while (g_hi >= 0.0) {
        lo = hi;
        g_lo = g_hi;
        hi *= 4.0;
        if (hi > 64.0) throw BracketingFailure("volume_bound: crossing above x = 64");
        g_hi = excess(hi);
    }
    (void)g_lo;

    while (hi / lo - 1.0 > 1e-14) {
        const double mid = std::sqrt(lo * hi);
        if (!(mid > lo && mid < hi)) break;
        if (excess(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double x = std::sqrt(lo * hi);
    return {x, f_n_radial(n, OrthoLength(2.0 * x), cfg).value, power_law_floor(n, area)};
}

}  // namespace orthospectrum
