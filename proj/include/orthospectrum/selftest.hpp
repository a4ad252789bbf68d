#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bounds.hpp"
#include "f_function.hpp"
#include "m_function.hpp"
#include "quadrature.hpp"
#include "special_functions.hpp"

namespace orthospectrum {

struct PropertyResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

enum class SelftestLevel { fast, full };

/// The kernels a self-test run checks. Defaults are the library functions;
/// tests substitute deliberately broken versions to confirm they are caught.
struct SelftestKernels {
    std::function<double(int, double)> m_closed = [](int n, double b) { return orthospectrum::m_closed(n, b); };
    std::function<double(double)> m3_closed = [](double b) { return orthospectrum::m3_closed(b); };
    std::function<double(double)> m4_closed = [](double b) { return orthospectrum::m4_closed(b); };
    std::function<double(int)> k_constant = [](int n) { return orthospectrum::k_constant(n); };
};

namespace detail {

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

inline double rel_diff(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace detail

/// The ten tabulated K_n (n = 3..12), as exact multiples of powers of pi.
inline std::vector<double> k_constant_table() {
    const double p = pi;
    return {p / 2.0,
            1.0,
            11.0 * p * p / 192.0,
            5.0 * p / 54.0,
            137.0 * p * p * p / 30720.0,
            7.0 * p * p / 1125.0,
            121.0 * std::pow(p, 4) / 458752.0,
            761.0 * p * p * p / 2315250.0,
            7129.0 * std::pow(p, 5) / 566231040.0,
            1342.0 * std::pow(p, 4) / 93767625.0};
}

inline PropertyResult check_k_table(const SelftestKernels& k = {}) {
    const auto table = k_constant_table();
    double worst = 0.0;
    for (int n = 3; n <= 12; ++n)
        worst = std::max(worst, detail::rel_diff(k.k_constant(n), table[static_cast<std::size_t>(n - 3)]));
    return {"K_n table (n = 3..12)", worst <= 1e-12, "max rel diff " + detail::sci(worst)};
}

inline PropertyResult check_m_specializations(const SelftestKernels& k = {}) {
    double worst = 0.0;
    for (double b : {1.01, 1.1, 2.0, 10.0, 1000.0}) {
        worst = std::max(worst, detail::rel_diff(k.m_closed(3, b), k.m3_closed(b)));
        worst = std::max(worst, detail::rel_diff(k.m_closed(4, b), k.m4_closed(b)));
    }
    return {"M_3 and M_4 specializations", worst <= 1e-12, "max rel diff " + detail::sci(worst)};
}

inline PropertyResult check_m_near_one(const SelftestKernels& k = {}) {
    double worst = 0.0;
    const double b = 1.0 + 1e-6;
    for (int n = 3; n <= 8; ++n) {
        const double d = m_asymptotics(n).near_one;
        worst = std::max(worst, detail::rel_diff(std::pow(b - 1.0, n - 2) * k.m_closed(n, b), d));
    }
    return {"M_n near-one limit D_n", worst <= 1e-3, "max rel diff " + detail::sci(worst)};
}

/// Independent single-integral route for M_n against the closed form.
inline PropertyResult check_m_single_integral(const SelftestKernels& k = {}) {
    double worst = 0.0;
    const QuadratureConfig cfg{1e-12, 1e-300, 2000};
    for (int n = 3; n <= 8; ++n)
        for (double b : {1.1, 1.5, 2.0, 5.0, 10.0, 100.0})
            worst = std::max(worst, detail::rel_diff(k.m_closed(n, b), m_single_integral(n, b, cfg).value));
    return {"M_n closed form vs single-integral route", worst <= 1e-9, "max rel diff " + detail::sci(worst)};
}

inline PropertyResult check_crossing_residuals(const QuadratureConfig& cfg) {
    double worst = 0.0;
    for (auto [n, area] : {std::pair{3, 4.0 * pi}, {4, 10.0}, {5, 100.0}}) {
        const auto r = volume_bound(n, area, cfg);
        const double f = f_n_radial(n, OrthoLength(2.0 * r.x_star), cfg).value;
        worst = std::max(worst, std::abs(f - area * collar_volume_factor(n, r.x_star)) / r.H);
    }
    return {"crossing residuals F_n(2x*) = A S_n(x*)", worst <= 1e-8, "max rel residual " + detail::sci(worst)};
}

inline PropertyResult check_m_defining_integral(const SelftestKernels& k = {}) {
    double worst = 0.0;
    const QuadratureConfig cfg{1e-9, 1e-300, 4000};
    for (int n = 3; n <= 8; ++n)
        for (double b : {1.1, 1.5, 2.0, 5.0, 10.0, 100.0})
            worst = std::max(worst, detail::rel_diff(k.m_closed(n, b), m_defining_integral(n, b, cfg).value));
    return {"M_n closed form vs defining double integral", worst <= 1e-6, "max rel diff " + detail::sci(worst)};
}

inline PropertyResult check_f_representations(const QuadratureConfig& cfg) {
    double worst = 0.0;
    for (int n = 3; n <= 8; ++n)
        for (double l : {0.1, 0.5, 1.0, 2.0, 4.0}) {
            const OrthoLength len(l);
            worst = std::max(worst, detail::rel_diff(f_n_radial(n, len, cfg).value, f_n_alt(n, len, cfg).value));
        }
    return {"F_n radial vs alternate representation", worst <= 1e-8, "max rel diff " + detail::sci(worst)};
}

inline PropertyResult check_f2_double_integral() {
    double worst = 0.0;
    const QuadratureConfig cfg{1e-9, 1e-300, 4000};
    for (double l : {0.1, 1.0, 3.0})
        worst = std::max(worst, std::abs(f2_integral_oracle(l, cfg).value - f2_closed(l)));
    return {"F_2 closed form vs double integral", worst <= 1e-6, "max abs diff " + detail::sci(worst)};
}

inline PropertyResult check_monte_carlo(const QuadratureConfig& cfg) {
    double worst = 0.0;
    std::string note;
    bool ok = true;
    std::uint64_t seed = 20240611;
    for (double l : {1.0, 2.0}) {
        const OrthoLength len(l);
        const auto q = f_n_radial(3, len, cfg);
        try {
            const auto mc = f_n_direct_oracle(3, len, 10'000'000, seed++);
            const double z = std::abs(mc.value - q.value) / mc.err_estimate;
            worst = std::max(worst, z);
            ok = ok && z <= 3.0;
        } catch (const NonConvergence&) {
            ok = false;
            note += "standard error above 1% at l = " + std::to_string(l) + "; ";
        }
    }
    return {"F_3 Monte Carlo direct integral (l = 1, 2)", ok, note + "max |z| " + detail::sci(worst)};
}

/// Runs the self-test suite. The fast level checks tables, specializations and
/// crossing residuals; the full level adds the expensive oracle comparisons.
inline std::vector<PropertyResult> run_selftest(SelftestLevel level, const QuadratureConfig& cfg,
                                                const SelftestKernels& kernels = {}) {
    struct Check {
        const char* name;
        std::function<PropertyResult()> run;
    };
    std::vector<Check> checks{
        {"K_n table", [&] { return check_k_table(kernels); }},
        {"M_n specializations", [&] { return check_m_specializations(kernels); }},
        {"M_n near-one limit", [&] { return check_m_near_one(kernels); }},
        {"M_n single-integral route", [&] { return check_m_single_integral(kernels); }},
        {"crossing residuals", [&] { return check_crossing_residuals(cfg); }},
    };
    if (level == SelftestLevel::full) {
        checks.push_back({"M_n defining integral", [&] { return check_m_defining_integral(kernels); }});
        checks.push_back({"F_n representations", [&] { return check_f_representations(cfg); }});
        checks.push_back({"F_2 double integral", [] { return check_f2_double_integral(); }});
        checks.push_back({"Monte Carlo", [&] { return check_monte_carlo(cfg); }});
    }
    std::vector<PropertyResult> results;
    for (const auto& check : checks) {
        try {
            results.push_back(check.run());
        } catch (const std::exception& e) {
            results.push_back({check.name, false, std::string("raised: ") + e.what()});
        }
    }
    return results;
}

}  // namespace orthospectrum
