#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "f_function.hpp"
#include "quadrature.hpp"

namespace orthospectrum {

/// One orthogeodesic length with its multiplicity.
struct SpectrumEntry {
    double length;
    std::uint64_t multiplicity;
};

using OrthoSpectrum = std::vector<SpectrumEntry>;

/// Malformed orthospectrum input; line() is 1-based.
class SpectrumParseError : public std::runtime_error {
public:
    SpectrumParseError(std::size_t line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

}  // namespace detail

/// Reads the plain-text spectrum format: one `length [multiplicity]` per line,
/// `#` starts a comment, blank lines are skipped. Multiplicity defaults to 1.
inline OrthoSpectrum parse_spectrum(std::istream& in) {
    OrthoSpectrum entries;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto fields = detail::split_ws(line);
        if (fields.empty()) continue;
        if (fields.size() > 2) throw SpectrumParseError(line_no, "expected `length [multiplicity]`");

        double length = 0.0;
        const auto f0 = fields[0];
        const auto r0 = std::from_chars(f0.data(), f0.data() + f0.size(), length);
        if (r0.ec != std::errc{} || r0.ptr != f0.data() + f0.size())
            throw SpectrumParseError(line_no, "invalid length `" + std::string(f0) + "`");
        if (!(length > 0.0) || !std::isfinite(length))
            throw SpectrumParseError(line_no, "length must be finite and > 0");

        std::uint64_t mult = 1;
        if (fields.size() == 2) {
            const auto f1 = fields[1];
            const auto r1 = std::from_chars(f1.data(), f1.data() + f1.size(), mult);
            if (r1.ec != std::errc{} || r1.ptr != f1.data() + f1.size() || mult == 0)
                throw SpectrumParseError(line_no, "multiplicity must be a positive integer");
        }
        entries.push_back({length, mult});
    }
    return entries;
}

struct IdentityTerm {
    SpectrumEntry entry;
    KernelValue kernel;  // F_n(length), per single orthogeodesic
};

/// Sum_{l in spectrum} F_n(l): the volume predicted by the orthospectrum identity.
struct IdentitySum {
    double total = 0.0;
    double err_estimate = 0.0;
    std::vector<IdentityTerm> terms;
};

/// Accumulates multiplicity * F_n(length) over the entries, in file order.
/// Entries longer than `cutoff` are skipped when a cutoff is given.
inline IdentitySum identity_sum(int n, const OrthoSpectrum& spectrum, std::optional<double> cutoff,
                                const QuadratureConfig& cfg) {
    if (n < 2) throw std::domain_error("identity_sum: requires n >= 2");
    IdentitySum out;
    for (const auto& e : spectrum) {
        if (cutoff && e.length > *cutoff) continue;
        const auto kv = f_n(n, e.length, cfg);
        const auto m = static_cast<double>(e.multiplicity);
        out.total += m * kv.value;
        out.err_estimate += m * kv.err_estimate;
        out.terms.push_back({e, kv});
    }
    return out;
}

}  // namespace orthospectrum
