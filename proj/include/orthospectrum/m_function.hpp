#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadrature.hpp"
#include "special_functions.hpp"

namespace orthospectrum {

/// Limiting coefficients of M_n:
///   (b-1)^{n-2} M_n(b)           -> near_one  as b -> 1+
///   b^{n-1} / log(b) * M_n(b)     -> far_log   as b -> infinity
struct MAsymptotics {
    double near_one;
    double far_log;
};

namespace detail {

inline void require_m_dimension(int n) {
    if (n < 3) throw std::domain_error("M_n is defined for n >= 3, got n = " + std::to_string(n));
}

inline void require_ratio(double b, double b_minus_one) {
    if (!(b > 1.0) || !(b_minus_one > 0.0) || !std::isfinite(b))
        throw std::domain_error("M_n requires b > 1");
}

// Closed form with b - 1 supplied separately, so callers that know b - 1 to
// full relative precision (b close to 1) do not lose it to a subtraction.
//
// Written as four groups over (b-1)^{n-2}, (b+1)^{n-2}, (2b)^{n-2} and 2^{n-2}.
// For b away from 1 the groups cancel against each other to O(log b / b^{n-1}),
// so there the same expression is regrouped:
//   near/(b-1)^p + far/(b+1)^p = near ((b-1)^{-p} - (b+1)^{-p}) + (near + far)/(b+1)^p,
// with near + far and the two remaining L-differences summed in closed form
// (differences of powers via x^k - y^k = (x - y) sum_j x^j y^{k-1-j}).
inline double m_closed_offset(int n, double b, double bm1) {
    require_m_dimension(n);
    require_ratio(b, bm1);
    const int m = n - 3;
    const int p = n - 2;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;  // (-1)^n
    const double bp1 = b + 1.0;
    const double h = harmonic(n - 2);
    const double scale = 1.0 / ((n - 1.0) * (n - 2.0));

    if (b < 3.0) {
        const double near = std::log1p(bm1 * bm1 / (4.0 * b)) + 2.0 * h - truncated_log(m, bm1 / bp1) -
                            sign * truncated_log(m, -bm1 / bp1);
        const double far = -(2.0 * std::log(bm1) - std::log(4.0 * b)) - 2.0 * h + truncated_log(m, bp1 / bm1) +
                           sign * truncated_log(m, -bp1 / bm1);
        const double doubled = truncated_log(m, 2.0 * b / bp1) - truncated_log(m, 2.0 * b / bm1);
        const double two = truncated_log(m, 2.0 / bp1) - sign * truncated_log(m, -2.0 / bm1);
        return scale * (near * std::pow(bm1, -p) + far * std::pow(bp1, -p) + doubled * std::pow(2.0 * b, -p) +
                        two * std::pow(2.0, -p));
    }

    // d = (b-1)/(b+1) approaches 1 here; keep 1 - d = 2/(b+1) and 1 + d = 2b/(b+1) exact.
    const double d = bm1 / bp1;
    const double near_far_b = std::log1p(bm1 * bm1 / (4.0 * b)) + 2.0 * h -
                              (std::log(2.0 / bp1) + partial_log_series(m, d)) -
                              sign * (std::log(2.0 * b / bp1) + partial_log_series(m, -d));

    // g = log((b+1)/(b-1)); near + far = 2g + [L(1/d) - L(d)] + (-1)^n [L(-1/d) - L(-d)], d = (b-1)/(b+1).
    const double g = std::log1p(2.0 / bm1);
    double sum_near_far = 3.0 * g + sign * g;
    for (int k = 1; k <= m; ++k) {
        const double sh = 2.0 * std::sinh(k * g) / k;
        sum_near_far += sh + sign * ((k % 2 == 1) ? -sh : sh);
    }
    const double inv_bp1_p = std::pow(bp1, -p);
    const double groups12 = near_far_b * inv_bp1_p * std::expm1(p * g) + sum_near_far * inv_bp1_p;

    // L(x1) - L(x2), x1 = 2b/(b+1), x2 = 2b/(b-1).
    const double x1 = 2.0 * b / bp1;
    const double x2 = 2.0 * b / bm1;
    const double dx = -4.0 * b / (bm1 * bp1);
    double doubled = -2.0 * g;
    double mixed = 0.0;  // sum_{j<k} x1^j x2^{k-1-j}
    double x1_pow = 1.0;
    for (int k = 1; k <= m; ++k) {
        mixed = x2 * mixed + x1_pow;
        x1_pow *= x1;
        doubled += dx * mixed / k;
    }

    // L(y1) - (-1)^n L(-z2), y1 = 2/(b+1), z2 = 2/(b-1).
    double two = 0.0;
    if (b < 5.0) {
        two = truncated_log(m, 2.0 / bp1) - sign * truncated_log(m, -2.0 / bm1);
    } else {
        const double y1 = 2.0 / bp1;
        const double z2 = 2.0 / bm1;
        const double dy = -4.0 / (bm1 * bp1);
        double cross = 0.0;  // sum_{j<k} y1^j z2^{k-1-j}
        double y_pow = 1.0;  // y1^{k-1}
        double z_pow = 1.0;  // z2^{k-1}
        for (int k = 1;; ++k) {
            cross = z2 * cross + y_pow;
            y_pow *= y1;
            z_pow *= z2;
            if (k <= m) continue;
            // y1^k - (-1)^{n+k} z2^k
            const double diff = ((n + k) % 2 == 0) ? dy * cross : y_pow + z_pow;
            const double term = diff / k;
            two -= term;
            if (std::abs(term) <= 1e-17 * std::abs(two)) break;
        }
    }
    return scale * (groups12 + doubled * std::pow(2.0 * b, -p) + two * std::pow(2.0, -p));
}

}  // namespace detail

/// Closed form of M_n(b) for n >= 3 and b > 1, built from truncated logarithms.
inline double m_closed(int n, double b) { return detail::m_closed_offset(n, b, b - 1.0); }

/// M_3(b), three-term form.
inline double m3_closed(double b) {
    detail::require_ratio(b, b - 1.0);
    const double bm1 = b - 1.0;
    const double bp1 = b + 1.0;
    return 2.0 / (bm1 * bp1) * (1.0 - std::log(2.0)) - (bm1 / bp1) * std::log(bm1) / (2.0 * b) +
           (bp1 / bm1) * std::log(bp1) / (2.0 * b);
}

/// M_4(b), six-term form.
inline double m4_closed(double b) {
    detail::require_ratio(b, b - 1.0);
    const double bm1 = b - 1.0;
    const double bp1 = b + 1.0;
    const double lq = std::log(bm1 / bp1);
    const double t1 = (3.0 + 2.0 * std::log(bp1 * bp1 / (4.0 * b))) / (bm1 * bm1);
    const double t2 = (3.0 + 2.0 * std::log(bm1 * bm1 / (4.0 * b))) / (bp1 * bp1);
    const double t3 = (lq + b / bp1 - b / bm1) / (2.0 * b * b);
    // log((b-1)/(b+1)) + 2b/(b^2-1) = sum_{k odd >= 3} 2 (1 - 1/k) b^{-k}; summed
    // as a series once the two sides start to cancel.
    double t4 = 0.0;
    if (b < 2.0) {
        t4 = (lq + 1.0 / bp1 + 1.0 / bm1) / 2.0;
    } else {
        const double inv2 = 1.0 / (b * b);
        double power = 1.0 / (b * b * b);
        for (int k = 3;; k += 2) {
            const double term = (1.0 - 1.0 / k) * power;
            t4 += term;
            if (term <= 1e-17 * t4) break;
            power *= inv2;
        }
    }
    return (t1 - t2 + t3 + t4) / 6.0;
}

/// D_n = 2 H_{n-2} / ((n-1)(n-2)) and 4/(n-1).
inline MAsymptotics m_asymptotics(int n) {
    detail::require_m_dimension(n);
    return {2.0 * harmonic(n - 2) / ((n - 1.0) * (n - 2.0)), 4.0 / (n - 1.0)};
}

/// M_n(b) through the single-integral decomposition
///
///   M_n(b) = 1/(n-1) int_{-1}^{1} [log((b^2-1)(b+u) / (2b(1-u^2))) + H_{n-2}] / (b-u)^{n-1} du
///          + 1/((n-1)(n-2)) int_b^inf (1/(v-1) + 1/(v+1) - 1/(v+b)) ((v-1)^{2-n} - (v+1)^{2-n}) dv.
///
/// Both integrands are positive for large b, so unlike the closed form this
/// route does not cancel; it is the evaluation used for b far from 1.
inline KernelValue m_single_integral(int n, double b, const QuadratureConfig& cfg) {
    detail::require_m_dimension(n);
    detail::require_ratio(b, b - 1.0);
    const double h = harmonic(n - 2);
    const double log_front = std::log(b - 1.0) + std::log(b + 1.0) - std::log(2.0 * b);

    // u = +-(1 - t^3) removes the logarithmic endpoint singularities.
    auto half = [&](double side) {
        return [=](double t) {
            const double t3 = t * t * t;
            const double u = side * (1.0 - t3);
            const double one_minus_u2 = t3 * (2.0 - t3);
            const double value = log_front + std::log(b + u) - std::log(one_minus_u2) + h;
            return 3.0 * t * t * value * std::exp(-(n - 1.0) * std::log(b - u));
        };
    };
    const auto upper = integrate(half(1.0), 0.0, 1.0, cfg);
    const auto lower = integrate(half(-1.0), 0.0, 1.0, cfg);

    // v = b / tau.
    auto tail = [=](double tau) {
        if (tau <= 0.0) return 0.0;
        const double v = b / tau;
        const double weight = 1.0 / (v - 1.0) + 1.0 / (v + 1.0) - 1.0 / (v + b);
        const double ratio = -std::expm1((n - 2.0) * std::log1p(-2.0 / (v + 1.0)));
        return weight * std::exp(-(n - 2.0) * std::log(v - 1.0)) * ratio * b / (tau * tau);
    };
    const auto rest = integrate(tail, 0.0, 1.0, cfg);

    return {(upper.value + lower.value) / (n - 1.0) + rest.value / ((n - 1.0) * (n - 2.0)),
            (upper.err_estimate + lower.err_estimate) / (n - 1.0) +
                rest.err_estimate / ((n - 1.0) * (n - 2.0))};
}

/// M_n(b) as used inside the F_n integrals, with b - 1 supplied separately.
inline double m_kernel(int n, double b, double bm1) { return detail::m_closed_offset(n, b, bm1); }

/// M_n(b) from its defining double integral
///
///   int_{-1}^{1} du int_b^inf log((v^2-1)(u^2-b^2) / ((v^2-b^2)(u^2-1))) / (v-u)^n dv,
///
/// by nested adaptive quadrature. The outer variable is w = 1 - u and the inner
/// is t = v - b; both are pre-split geometrically at multiples of b - 1, where
/// the integrand concentrates.
inline KernelValue m_defining_integral(int n, double b, const QuadratureConfig& cfg) {
    detail::require_m_dimension(n);
    detail::require_ratio(b, b - 1.0);
    cfg.validate();
    const double bm1 = b - 1.0;

    QuadratureConfig inner_cfg = cfg;
    inner_cfg.rel_tol = cfg.rel_tol * 1e-2;
    inner_cfg.abs_tol = 1e-300;

    std::vector<double> inner_split;
    std::vector<double> outer_split{1.0};
    for (double s = bm1 * 1e-3; s < 1e3; s *= 10.0) {
        inner_split.push_back(s);
        if (s < 2.0) outer_split.push_back(s);
    }
    std::vector<double> inner_pts = partition(0.0, 1e4, inner_split);
    inner_pts.push_back(std::numeric_limits<double>::infinity());
    const std::vector<double> outer_pts = partition(0.0, 2.0, outer_split);

    double worst_inner_rel = 0.0;
    auto inner = [&](double w) {
        const double u = 1.0 - w;
        const double one_minus_u2 = w * (2.0 - w);
        const double b_minus_u = bm1 + w;
        const double log_fixed = std::log(b_minus_u) + std::log(b + u) - std::log(one_minus_u2);
        auto integrand = [&](double t) {
            const double v = b + t;
            const double log_ratio =
                std::log(bm1 + t) + std::log(v + 1.0) + log_fixed - std::log(t) - std::log(v + b);
            return log_ratio * std::exp(-n * std::log(b_minus_u + t));
        };
        const auto kv = integrate(integrand, std::span<const double>(inner_pts), inner_cfg);
        if (kv.value != 0.0) worst_inner_rel = std::max(worst_inner_rel, kv.err_estimate / std::abs(kv.value));
        return kv.value;
    };
    // Leave room in the target for the propagated inner error.
    QuadratureConfig outer_cfg = cfg;
    outer_cfg.rel_tol = 0.9 * cfg.rel_tol;
    outer_cfg.abs_tol = 0.9 * cfg.abs_tol;
    auto outer = integrate(inner, std::span<const double>(outer_pts), outer_cfg);
    outer.err_estimate += worst_inner_rel * std::abs(outer.value);
    return outer;
}

}  // namespace orthospectrum
