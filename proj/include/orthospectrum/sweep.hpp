#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bounds.hpp"
#include "f_function.hpp"
#include "quadrature.hpp"

namespace orthospectrum {

enum class SweepScale { linear, log };

/// A grid of lengths l_min = l_0 < ... < l_{steps-1} = l_max.
struct SweepSpec {
    int n = 3;
    double l_min = 0.1;
    double l_max = 5.0;
    int steps = 50;
    SweepScale scale = SweepScale::log;

    void validate() const {
        if (n < 2) throw std::domain_error("sweep: requires n >= 2");
        if (!(l_min > 0.0) || !(l_max > l_min) || !std::isfinite(l_max))
            throw std::domain_error("sweep: requires 0 < l_min < l_max");
        if (steps < 2) throw std::domain_error("sweep: requires steps >= 2");
    }
};

/// Optional figure-style columns: K_n / l^{n-2} and A * S_n(l/2). With l = 2x
/// the last one is the collar curve A S_n(x) that crosses F_n(2x) at H_n(A).
struct SweepColumns {
    bool figure = false;
    double area = 4.0 * pi;
};

struct SweepRow {
    double l;
    KernelValue f;
    double k_over_l_pow = 0.0;
    double area_collar = 0.0;
};

inline std::vector<double> sweep_grid(const SweepSpec& spec) {
    spec.validate();
    std::vector<double> grid(static_cast<std::size_t>(spec.steps));
    const double last = spec.steps - 1.0;
    for (int i = 0; i < spec.steps; ++i) {
        const double frac = i / last;
        grid[static_cast<std::size_t>(i)] =
            spec.scale == SweepScale::linear
                ? spec.l_min + (spec.l_max - spec.l_min) * frac
                : spec.l_min * std::exp(std::log(spec.l_max / spec.l_min) * frac);
    }
    grid.front() = spec.l_min;
    grid.back() = spec.l_max;
    return grid;
}

/// Evaluates F_n over the grid, optionally on several threads. Rows come back in
/// grid order whatever the completion order.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SweepColumns& cols, const QuadratureConfig& cfg,
                                       unsigned threads = 1) {
    const auto grid = sweep_grid(spec);
    if (cols.figure) {
        if (spec.n < 3) throw std::domain_error("sweep: figure columns require n >= 3");
        if (!(cols.area > 0.0)) throw std::domain_error("sweep: area must be > 0");
    }
    std::vector<SweepRow> rows(grid.size());
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < grid.size(); i += stride) {
            const double l = grid[i];
            SweepRow row{l, f_n(spec.n, l, cfg)};
            if (cols.figure) {
                row.k_over_l_pow = k_constant(spec.n) / std::pow(l, spec.n - 2);
                row.area_collar = cols.area * collar_volume_factor(spec.n, 0.5 * l);
            }
            rows[i] = row;
        }
    };
    threads = std::clamp(threads, 1u, static_cast<unsigned>(grid.size()));
    if (threads == 1) {
        work(0, 1);
        return rows;
    }
    std::vector<std::future<void>> jobs;
    for (unsigned t = 0; t < threads; ++t) jobs.push_back(std::async(std::launch::async, work, t, threads));
    for (auto& j : jobs) j.get();
    return rows;
}

/// %g-style formatting with `digits` significant digits; 17 digits round-trip exactly.
inline std::string format_number(double v, int digits = 17) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, std::clamp(digits, 1, 17));
    return std::string(buf, res.ptr);
}

/// CSV with header `l,F_n,err_estimate[,K_over_l_pow,A_S_n]`, LF line endings.
inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, const SweepColumns& cols,
                            int digits = 17) {
    out << "l,F_n,err_estimate";
    if (cols.figure) out << ",K_over_l_pow,A_S_n";
    out << '\n';
    for (const auto& r : rows) {
        out << format_number(r.l, digits) << ',' << format_number(r.f.value, digits) << ','
            << format_number(r.f.err_estimate, digits);
        if (cols.figure) out << ',' << format_number(r.k_over_l_pow, digits) << ',' << format_number(r.area_collar, digits);
        out << '\n';
    }
}

}  // namespace orthospectrum
