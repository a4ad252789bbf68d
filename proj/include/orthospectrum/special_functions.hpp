#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace orthospectrum {

inline constexpr double pi = std::numbers::pi;
inline constexpr double pi_sq_over_6 = std::numbers::pi * std::numbers::pi / 6.0;

namespace detail {

inline void require_order(int n, const char* who) {
    if (n < 0) throw std::domain_error(std::string(who) + ": order must be >= 0");
}

}  // namespace detail

/// P_n(z) = z + z^2/2 + ... + z^n/n, with P_0 = 0.
inline double partial_log_series(int n, double z) {
    detail::require_order(n, "partial_log_series");
    double sum = 0.0;
    double power = 1.0;
    for (int k = 1; k <= n; ++k) {
        power *= z;
        sum += power / k;
    }
    return sum;
}

/// n-th harmonic number, P_n(1).
inline double harmonic(int n) { return partial_log_series(n, 1.0); }

/// L_n(x) = log|1 - x| + P_n(x), the tail of the series of log(1 - x) past order n.
///
/// For |x| <= 1/2 the tail -sum_{k>n} x^k/k is summed directly, which avoids
/// the cancellation between log|1-x| and P_n(x) when x is small.
inline double truncated_log(int n, double x) {
    detail::require_order(n, "truncated_log");
    if (x == 1.0) throw std::domain_error("truncated_log: logarithmic singularity at x = 1");
    if (std::abs(x) <= 0.5) {
        double power = std::pow(x, n + 1);
        double sum = 0.0;
        for (int k = n + 1;; ++k) {
            const double term = power / k;
            sum += term;
            if (std::abs(term) <= std::numeric_limits<double>::epsilon() * 0.25 * std::abs(sum) || term == 0.0)
                break;
            power *= x;
        }
        return -sum;
    }
    return std::log(std::abs(1.0 - x)) + partial_log_series(n, x);
}

/// Gamma(m / 2) for positive integers m, by exact recursion from Gamma(1) = 1
/// and Gamma(1/2) = sqrt(pi).
inline double gamma_half_integer(int m) {
    if (m < 1) throw std::domain_error("gamma_half_integer: argument must be positive");
    double value = (m % 2 == 0) ? 1.0 : std::sqrt(pi);
    for (int k = (m % 2 == 0) ? 2 : 1; k + 2 <= m; k += 2) value *= 0.5 * k;
    return value;
}

/// Volume of the unit sphere S^k, i.e. 2 pi^{(k+1)/2} / Gamma((k+1)/2).
inline double sphere_volume(int k) {
    if (k < 0) throw std::domain_error("sphere_volume: dimension must be >= 0");
    return 2.0 * std::pow(pi, 0.5 * (k + 1)) / gamma_half_integer(k + 1);
}

/// Real dilogarithm Li_2(x) on [0, 1].
inline double dilogarithm(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("dilogarithm: argument outside [0, 1]");
    if (x == 1.0) return pi_sq_over_6;
    if (x > 0.5) return pi_sq_over_6 - std::log(x) * std::log1p(-x) - dilogarithm(1.0 - x);
    double power = x;
    double sum = 0.0;
    for (int k = 1; power != 0.0; ++k) {
        const double term = power / (static_cast<double>(k) * k);
        sum += term;
        if (term <= 1e-17 * sum) break;
        power *= x;
    }
    return sum;
}

/// Rogers L-function in the unnormalised convention
/// L(x) = Li_2(x) + log(x) log(1 - x) / 2, so that L(1) = pi^2/6.
inline double rogers_L(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("rogers_L: argument outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x > 0.5) return pi_sq_over_6 - rogers_L(1.0 - x);
    return dilogarithm(x) + 0.5 * std::log(x) * std::log1p(-x);
}

}  // namespace orthospectrum
