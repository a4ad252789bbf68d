#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "m_function.hpp"
#include "quadrature.hpp"
#include "special_functions.hpp"

namespace orthospectrum {

/// Length l > 0 of an orthogeodesic, together with the separation a = e^l of
/// the two boundary planes it joins. a - 1 and a^2 - 1 are kept through expm1
/// so that short lengths keep full relative precision.
class OrthoLength {
public:
    explicit OrthoLength(double l) : l_(l) {
        if (!(l > 0.0) || !std::isfinite(l))
            throw std::domain_error("orthogeodesic length must be finite and > 0, got " + std::to_string(l));
    }

    [[nodiscard]] double length() const noexcept { return l_; }
    [[nodiscard]] double separation() const noexcept { return std::exp(l_); }
    [[nodiscard]] double separation_minus_one() const noexcept { return std::expm1(l_); }
    [[nodiscard]] double separation_sq_minus_one() const noexcept { return std::expm1(2.0 * l_); }

private:
    double l_;
};

/// Ideal endpoints x, y of a geodesic on the boundary line of the upper
/// half-plane, and the radius a > 1 of the outer boundary circle.
struct ChordEndpoints {
    double x;
    double y;
    double a;
};

/// Hyperbolic length of the part of the geodesic with endpoints x, y lying
/// between the half-circles of radius 1 and a about the origin:
///   L_a(x, y) = 1/2 log((y^2-1)(x^2-a^2) / ((y^2-a^2)(x^2-1))),  |x| < 1 < a < |y|.
/// Symmetric in its endpoints.
inline double chord_length(const ChordEndpoints& e) {
    if (!(e.a > 1.0)) throw std::domain_error("chord_length: requires a > 1");
    double inside = e.x;
    double outside = e.y;
    if (std::abs(inside) >= 1.0) std::swap(inside, outside);
    if (!(std::abs(inside) < 1.0) || !(std::abs(outside) > e.a))
        throw std::domain_error("chord_length: geodesic does not cross both boundary planes");
    const double s2 = (e.a - 1.0) * (e.a + 1.0);
    const double outer = (std::abs(outside) - e.a) * (std::abs(outside) + e.a);
    const double inner = (1.0 - inside) * (1.0 + inside);
    return 0.5 * (std::log1p(s2 / outer) + std::log1p(s2 / inner));
}

/// Chord length for endpoints x, y in R^{n-1}. The geodesic lies in the vertical
/// plane over the line through x and y; that plane meets the boundary
/// hemispheres in half-circles of radii sqrt(1 - r^2) and sqrt(a^2 - r^2) about
/// the foot w of the perpendicular from the origin (r = |w|), and rescaling by
/// the first radius reduces to the planar case.
inline double chord_length_nd(int n, std::span<const double> x, std::span<const double> y, double a) {
    if (n < 3) throw std::domain_error("chord_length_nd: requires n >= 3");
    const auto dim = static_cast<std::size_t>(n - 1);
    if (x.size() != dim || y.size() != dim)
        throw std::invalid_argument("chord_length_nd: points must have n - 1 coordinates");
    if (!(a > 1.0)) throw std::domain_error("chord_length_nd: requires a > 1");

    double dist2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) dist2 += (y[i] - x[i]) * (y[i] - x[i]);
    const double dist = std::sqrt(dist2);
    if (!(dist > 0.0)) throw std::domain_error("chord_length_nd: endpoints coincide");

    double s = 0.0;
    double t = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double u = (y[i] - x[i]) / dist;
        s += x[i] * u;
        t += y[i] * u;
    }
    double r2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double w = x[i] - s * (y[i] - x[i]) / dist;
        r2 += w * w;
    }
    if (!(r2 < 1.0)) throw std::domain_error("chord_length_nd: geodesic misses the inner plane");
    const double r1 = std::sqrt(1.0 - r2);
    const double r2_radius = std::sqrt(a * a - r2);
    return chord_length({s / r1, t / r1, r2_radius / r1});
}

/// 2 V_{n-2} V_{n-3} / V_{n-1}, the constant in front of both F_n integrals.
inline double volume_prefactor(int n) {
    if (n < 3) throw std::domain_error("volume_prefactor: requires n >= 3");
    return 2.0 * sphere_volume(n - 2) * sphere_volume(n - 3) / sphere_volume(n - 1);
}

/// F_n(l) = c_n int_0^1 r^{n-3} (1-r^2)^{-(n-2)/2} M_n(sqrt((a^2-r^2)/(1-r^2))) dr,
/// integrated in phi with r = cos(phi), so that sqrt(1 - r^2) = sin(phi) and
/// a^2 - r^2 = (a^2 - 1) + sin^2(phi) carry no cancellation.
inline KernelValue f_n_radial(int n, OrthoLength l, const QuadratureConfig& cfg) {
    if (n < 3) throw std::domain_error("f_n_radial: requires n >= 3 (use f2_closed for n = 2)");
    const double s2 = l.separation_sq_minus_one();
    const double root = std::sqrt(s2);

    auto integrand = [=](double phi) {
        const double sp = std::sin(phi);
        const double cp = std::cos(phi);
        if (sp < 1e-150) return 0.0;
        const double b2m1 = s2 / (sp * sp);
        if (!std::isfinite(b2m1)) return 0.0;
        const double b = std::sqrt(1.0 + b2m1);
        const double m = m_kernel(n, b, b2m1 / (b + 1.0));
        if (m == 0.0) return 0.0;
        if (n == 3) return m;
        if (cp <= 0.0) return 0.0;
        return std::exp((n - 3.0) * std::log(cp / sp) + std::log(m));
    };

    std::vector<double> split;
    for (double f : {0.1, 0.3, 1.0, 3.0, 10.0, 30.0}) split.push_back(f * root);
    const auto pts = partition(0.0, 0.5 * pi, split);
    auto kv = integrate(integrand, std::span<const double>(pts), cfg);
    const double c = volume_prefactor(n);
    return {c * kv.value, c * kv.err_estimate};
}

/// F_n(l) = c_n int_a^inf ((x^2-a^2)/(a^2-1))^{n/2-2} x M_n(x) / (x^2-1) dx,
/// integrated in w with x = a cosh(w). The substitution absorbs the
/// (x^2 - a^2)^{-1/2} endpoint singularity that appears for n = 3.
inline KernelValue f_n_alt(int n, OrthoLength l, const QuadratureConfig& cfg) {
    if (n < 3) throw std::domain_error("f_n_alt: requires n >= 3 (use f2_closed for n = 2)");
    const double a = l.separation();
    const double am1 = l.separation_minus_one();
    const double s2 = l.separation_sq_minus_one();
    const double root = std::sqrt(s2);

    auto integrand = [=](double w) {
        if (w > 350.0) return 0.0;
        const double sh = std::sinh(w);
        const double ch = std::cosh(w);
        const double sh_half = std::sinh(0.5 * w);
        const double x = a * ch;
        const double xm1 = am1 + 2.0 * a * sh_half * sh_half;
        const double x2m1 = s2 + a * a * sh * sh;
        if (!std::isfinite(x2m1)) return 0.0;
        const double m = m_kernel(n, x, xm1);
        if (m == 0.0) return 0.0;
        // ((x^2-a^2)/(a^2-1))^{n/2-2} * x * dx / (x^2-1), with q = a sinh(w) / sqrt(a^2-1).
        const double q = a * sh / root;
        double log_value = std::log(root * x) - std::log(x2m1) + std::log(m);
        if (n > 3) log_value += (n - 3.0) * std::log(q);
        return std::exp(log_value);
    };

    const double knee = std::sqrt(am1 / a);
    std::vector<double> split;
    for (double f : {0.1, 0.3, 1.0, 3.0, 10.0}) split.push_back(f * knee);
    split.push_back(1.0);
    split.push_back(4.0);
    auto pts = partition(0.0, 16.0, split);
    pts.push_back(std::numeric_limits<double>::infinity());
    auto kv = integrate(integrand, std::span<const double>(pts), cfg);
    const double c = volume_prefactor(n);
    return {c * kv.value, c * kv.err_estimate};
}

/// F_2(l) = (4/pi) L(sech^2(l/2)) with L the Rogers L-function.
inline double f2_closed(double l) {
    if (!(l > 0.0) || !std::isfinite(l)) throw std::domain_error("f2_closed: requires l > 0");
    const double c = std::cosh(0.5 * l);
    const double x = 1.0 / (c * c);
    if (x <= 0.5) return 4.0 / pi * rogers_L(x);
    const double t = std::tanh(0.5 * l);
    return 4.0 / pi * (pi_sq_over_6 - rogers_L(t * t));
}

/// F_2(l) from the planar double integral over D x D_a:
///   (1/pi) int_{-1}^{1} dx int_{|y| > a} log((y^2-1)(x^2-a^2) / ((y^2-a^2)(x^2-1))) / (x-y)^2 dy.
/// Both components y > a and y < -a of D_a are integrated.
inline KernelValue f2_integral_oracle(double l, const QuadratureConfig& cfg) {
    const OrthoLength len(l);
    cfg.validate();
    const double a = len.separation();
    const double am1 = len.separation_minus_one();
    const double s2 = len.separation_sq_minus_one();

    QuadratureConfig inner_cfg = cfg;
    inner_cfg.rel_tol = cfg.rel_tol * 1e-2;
    inner_cfg.abs_tol = 1e-300;

    std::vector<double> inner_split;
    std::vector<double> outer_split{1.0};
    for (double s = am1 * 1e-3; s < 1e3; s *= 10.0) {
        inner_split.push_back(s);
        if (s < 2.0) outer_split.push_back(s);
    }
    std::vector<double> inner_pts = partition(0.0, 1e4, inner_split);
    inner_pts.push_back(std::numeric_limits<double>::infinity());
    const auto outer_pts = partition(0.0, 2.0, outer_split);

    double worst_inner_rel = 0.0;
    // Outer variable w = 1 - x; inner t = y - a for the branch y > a. The branch
    // y < -a is the mirror image x -> -x, i.e. w -> 2 - w.
    auto inner = [&](double w) {
        const double x = 1.0 - w;
        const double one_minus_x2 = w * (2.0 - w);
        const double log_inside = std::log1p(s2 / one_minus_x2);
        auto integrand = [&](double t) {
            const double y = a + t;
            const double log_outside = std::log1p(s2 / (t * (y + a)));
            const double ratio = log_inside + log_outside;
            const double near = y - x;
            const double far = y + x;
            return ratio * (1.0 / (near * near) + 1.0 / (far * far));
        };
        const auto kv = integrate(integrand, std::span<const double>(inner_pts), inner_cfg);
        if (kv.value != 0.0) worst_inner_rel = std::max(worst_inner_rel, kv.err_estimate / std::abs(kv.value));
        return kv.value;
    };
    auto outer = integrate(inner, std::span<const double>(outer_pts), cfg);
    outer.err_estimate += worst_inner_rel * std::abs(outer.value);
    return {outer.value / pi, outer.err_estimate / pi};
}

/// Monte Carlo estimate of
///   F_n(l) = 4 / V_{n-1} int_{|x| <= 1} int_{|y| >= a} L_a(x, y) / |x - y|^{2n-2} dV(x) dV(y).
///
/// x is uniform in the unit ball of R^{n-1}. y has uniform direction and radius
/// rho = a U^{-1/(n-1)}, i.e. density (n-1) a^{n-1} / (V_{n-2} |y|^{2n-2}) on |y| >= a,
/// which matches the kernel's tail so the importance weight stays bounded.
/// Returns the mean with its standard error; raises NonConvergence when the
/// standard error exceeds 1% of the estimate.
inline KernelValue f_n_direct_oracle(int n, OrthoLength l, std::size_t samples, std::uint64_t seed) {
    if (n != 3 && n != 4) throw std::domain_error("f_n_direct_oracle: supported for n = 3 and n = 4");
    if (l.length() < 0.3) throw std::domain_error("f_n_direct_oracle: requires l >= 0.3");
    if (samples < 2) throw std::domain_error("f_n_direct_oracle: needs at least two samples");

    const int dim = n - 1;
    const double a = l.separation();
    const double ball_volume = sphere_volume(n - 2) / dim;
    // 1 / p(y) = V_{n-2} |y|^{2n-2} / ((n-1) a^{n-1})
    const double y_scale = sphere_volume(n - 2) / (dim * std::pow(a, dim));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    std::vector<double> x(static_cast<std::size_t>(dim));
    std::vector<double> y(static_cast<std::size_t>(dim));

    auto direction = [&](std::vector<double>& v) {
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (auto& c : v) {
                c = normal(rng);
                norm2 += c * c;
            }
        } while (norm2 == 0.0);
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& c : v) c *= inv;
    };

    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        direction(x);
        const double rx = std::pow(uniform(rng), 1.0 / dim);
        for (auto& c : x) c *= rx;
        direction(y);
        const double ry = a * std::pow(1.0 - uniform(rng), -1.0 / dim);
        for (auto& c : y) c *= ry;

        double dist2 = 0.0;
        for (int k = 0; k < dim; ++k) dist2 += (x[k] - y[k]) * (x[k] - y[k]);
        const double kernel = chord_length_nd(n, x, y, a) / std::pow(dist2, dim);
        const double weight = kernel * ball_volume * y_scale * std::pow(ry, 2 * dim);

        // Welford update
        const double delta = weight - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (weight - mean);
    }
    const double variance = m2 / static_cast<double>(samples - 1);
    const double scale = 4.0 / sphere_volume(n - 1);
    const KernelValue result{scale * mean, scale * std::sqrt(variance / static_cast<double>(samples))};
    if (result.err_estimate > 0.01 * result.value)
        throw NonConvergence("f_n_direct_oracle: standard error above 1% of the estimate", result);
    return result;
}

/// K_n = lim_{l -> 0} l^{n-2} F_n(l)
///     = 2 pi^{(n-3)/2} H_{n-2} Gamma(n/2+1) Gamma(n/2-1) / (n Gamma((n+1)/2) Gamma(n-1)).
inline double k_constant(int n) {
    if (n < 3) throw std::domain_error("k_constant: requires n >= 3");
    return 2.0 * std::pow(pi, 0.5 * (n - 3)) * harmonic(n - 2) * gamma_half_integer(n + 2) *
           gamma_half_integer(n - 2) / (n * gamma_half_integer(n + 1) * gamma_half_integer(2 * n - 2));
}

/// lim_{l -> inf} e^{(n-1) l} / l * F_n(l) = (n-2) pi^{(n-2)/2} Gamma(n/2-1) / Gamma((n+1)/2)^2.
inline double large_l_coefficient(int n) {
    if (n < 3) throw std::domain_error("large_l_coefficient: requires n >= 3");
    const double g = gamma_half_integer(n + 1);
    return (n - 2.0) * std::pow(pi, 0.5 * (n - 2)) * gamma_half_integer(n - 2) / (g * g);
}

/// F_n(l) for any n >= 2: the closed form for n = 2 (zero error estimate),
/// the radial quadrature otherwise.
inline KernelValue f_n(int n, double l, const QuadratureConfig& cfg) {
    if (n < 2) throw std::domain_error("F_n is defined for n >= 2");
    if (n == 2) return {f2_closed(l), 0.0};
    return f_n_radial(n, OrthoLength(l), cfg);
}

}  // namespace orthospectrum
