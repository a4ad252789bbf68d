#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace orthospectrum {

/// Tolerances and subdivision budget for every adaptive integral in the library.
/// An integral is accepted once err <= max(abs_tol, rel_tol * |value|).
struct QuadratureConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::invalid_argument("quadrature tolerances must be strictly positive");
        if (max_subdivisions < 1)
            throw std::invalid_argument("quadrature subdivision budget must be >= 1");
    }

    [[nodiscard]] double target(double value) const {
        return std::max(abs_tol, rel_tol * std::abs(value));
    }
};

/// A numerically computed value with its absolute error estimate.
struct KernelValue {
    double value = 0.0;
    double err_estimate = 0.0;
};

/// Raised when an adaptive scheme exhausts its budget before meeting tolerance.
/// Carries the best estimate reached so far.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, KernelValue partial)
        : std::runtime_error(what), partial_(partial) {}

    [[nodiscard]] const KernelValue& partial() const noexcept { return partial_; }

private:
    KernelValue partial_;
};

namespace detail {

struct GkEstimate {
    double result;
    double error;
};

// 21-point Kronrod rule with the embedded 10-point Gauss rule on [lo, hi].
// The error heuristic is the QUADPACK one (qk21).
template <class F>
GkEstimate gauss_kronrod21(F& f, double lo, double hi) {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    static const auto& xk = gauss_kronrod<double, 21>::abscissa();
    static const auto& wk = gauss_kronrod<double, 21>::weights();
    static const auto& wg = gauss<double, 10>::weights();

    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    std::array<double, 21> fv{};
    fv[0] = f(center);
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double dx = half * xk[i];
        fv[2 * i - 1] = f(center - dx);
        fv[2 * i] = f(center + dx);
    }

    double kronrod = wk[0] * fv[0];
    double gauss_sum = 0.0;
    double resabs = std::abs(kronrod);
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double pair = fv[2 * i - 1] + fv[2 * i];
        kronrod += wk[i] * pair;
        resabs += wk[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
        if (i % 2 == 1) gauss_sum += wg[i / 2] * pair;
    }
    const double mean = 0.5 * kronrod;
    double resasc = wk[0] * std::abs(fv[0] - mean);
    for (std::size_t i = 1; i < xk.size(); ++i)
        resasc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));

    kronrod *= half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((kronrod - gauss_sum * half));
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();
    if (resabs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {kronrod, err};
}

struct Segment {
    double lo;
    double hi;
    double result;
    double error;
    bool mapped;  // integrand is evaluated through the tail map t -> origin + (1-t)/t
    double origin;
};

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration over the partition given by
/// `points` (sorted, at least two entries). The last point may be +infinity,
/// in which case the final piece is mapped onto (0, 1]. Integrable endpoint
/// singularities are fine; interior ones must be listed as break points.
template <class F>
KernelValue integrate(F&& f, std::span<const double> points, const QuadratureConfig& cfg) {
    cfg.validate();
    if (points.size() < 2) throw std::invalid_argument("integrate: need at least two points");

    auto eval = [&](const detail::Segment& s) {
        if (!s.mapped) return detail::gauss_kronrod21(f, s.lo, s.hi);
        auto g = [&](double t) {
            if (t <= 0.0) return 0.0;
            const double x = s.origin + (1.0 - t) / t;
            if (!std::isfinite(x)) return 0.0;
            return f(x) / (t * t);
        };
        return detail::gauss_kronrod21(g, s.lo, s.hi);
    };

    std::vector<detail::Segment> segs;
    segs.reserve(static_cast<std::size_t>(cfg.max_subdivisions) + points.size());
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double lo = points[i];
        const double hi = points[i + 1];
        if (!(hi > lo)) throw std::invalid_argument("integrate: break points must increase");
        detail::Segment s{lo, hi, 0.0, 0.0, false, 0.0};
        if (std::isinf(hi)) s = {0.0, 1.0, 0.0, 0.0, true, lo};
        const auto est = eval(s);
        s.result = est.result;
        s.error = est.error;
        segs.push_back(s);
    }

    auto by_error = [](const detail::Segment& a, const detail::Segment& b) { return a.error < b.error; };
    std::make_heap(segs.begin(), segs.end(), by_error);

    auto totals = [&] {
        KernelValue kv;
        for (const auto& s : segs) {
            kv.value += s.result;
            kv.err_estimate += s.error;
        }
        return kv;
    };

    KernelValue total = totals();
    int subdivisions = 0;
    for (;;) {
        if (!std::isfinite(total.value) || !std::isfinite(total.err_estimate))
            throw NonConvergence("integrate: non-finite integrand value", total);
        if (total.err_estimate <= cfg.target(total.value)) break;
        if (subdivisions >= cfg.max_subdivisions)
            throw NonConvergence("integrate: subdivision budget exhausted", total);

        std::pop_heap(segs.begin(), segs.end(), by_error);
        const detail::Segment worst = segs.back();
        segs.pop_back();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            // Cannot split further in double precision; keep the segment and give up.
            segs.push_back(worst);
            std::push_heap(segs.begin(), segs.end(), by_error);
            throw NonConvergence("integrate: roundoff limits subdivision", totals());
        }
        for (auto [lo, hi] : {std::pair{worst.lo, mid}, std::pair{mid, worst.hi}}) {
            detail::Segment s{lo, hi, 0.0, 0.0, worst.mapped, worst.origin};
            const auto est = eval(s);
            s.result = est.result;
            s.error = est.error;
            segs.push_back(s);
            std::push_heap(segs.begin(), segs.end(), by_error);
        }
        ++subdivisions;
        // Re-summing avoids drift from incremental updates.
        total = totals();
    }
    return total;
}

template <class F>
KernelValue integrate(F&& f, double lo, double hi, const QuadratureConfig& cfg) {
    const double pts[2] = {lo, hi};
    return integrate(std::forward<F>(f), std::span<const double>(pts), cfg);
}

/// Sorts `points`, drops entries outside (lo, hi) and duplicates, and brackets
/// the result with lo and hi.
inline std::vector<double> partition(double lo, double hi, std::vector<double> interior) {
    std::vector<double> pts{lo};
    std::sort(interior.begin(), interior.end());
    for (double p : interior)
        if (p > pts.back() && p < hi) pts.push_back(p);
    pts.push_back(hi);
    return pts;
}

}  // namespace orthospectrum
