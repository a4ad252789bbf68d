// Command-line front end for the orthospectrum kernels.
//
// Exit codes: 0 success, 1 self-test failure, 2 invalid arguments or input,
// 3 numerical non-convergence, 4 I/O error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <orthospectrum/orthospectrum.hpp>

namespace os = orthospectrum;

namespace {

enum Exit : int { ok = 0, selftest_failed = 1, bad_argument = 2, no_convergence = 3, io_error = 4 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    os::QuadratureConfig cfg;
    int digits = 17;

    [[nodiscard]] std::string fmt(double v) const { return os::format_number(v, digits); }
};

void print_kernel(const Globals& g, const char* label, const os::KernelValue& kv) {
    std::cout << label << " = " << g.fmt(kv.value) << '\n' << "err_estimate = " << g.fmt(kv.err_estimate) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orthospectrum volume kernels F_n, M_n and boundary-area volume bounds"};
    app.require_subcommand(1);

    Globals g;
    app.add_option("--rtol", g.cfg.rel_tol, "Relative quadrature tolerance")->capture_default_str();
    app.add_option("--atol", g.cfg.abs_tol, "Absolute quadrature tolerance")->capture_default_str();
    app.add_option("--maxsub", g.cfg.max_subdivisions, "Subdivision budget per integral")->capture_default_str();
    app.add_option("--digits", g.digits, "Significant digits in printed numbers")
        ->check(CLI::Range(1, 17))
        ->capture_default_str();

    // fn
    int fn_n = 3;
    double fn_l = 0.0;
    std::string fn_form = "radial";
    auto* fn = app.add_subcommand("fn", "Evaluate F_n(l)");
    fn->add_option("-n", fn_n, "Dimension (n >= 2)")->required();
    fn->add_option("-l", fn_l, "Orthogeodesic length (l > 0)")->required();
    fn->add_option("--form", fn_form, "Integral form for n >= 3")
        ->check(CLI::IsMember({"radial", "alt"}))
        ->capture_default_str();

    // mn
    int mn_n = 3;
    double mn_b = 0.0;
    std::string mn_method = "closed";
    auto* mn = app.add_subcommand("mn", "Evaluate M_n(b)");
    mn->add_option("-n", mn_n, "Dimension (n >= 3)")->required();
    mn->add_option("-b", mn_b, "Ratio b > 1")->required();
    mn->add_option("--method", mn_method, "closed, single (1-D integrals) or integral (defining double integral)")
        ->check(CLI::IsMember({"closed", "single", "integral"}))
        ->capture_default_str();

    // kn
    std::optional<int> kn_n;
    auto* kn = app.add_subcommand("kn", "Print K_n, D_n and the large-l coefficient");
    kn->add_option("-n", kn_n, "Single dimension (default: n = 3..12)");

    // bound
    int bound_n = 3;
    double bound_area = 0.0;
    auto* bound = app.add_subcommand("bound", "Volume lower bound H_n(A) from the boundary area");
    bound->add_option("-n", bound_n, "Dimension (n >= 3)")->required();
    bound->add_option("-A", bound_area, "Boundary area A > 0")->required();

    // sum
    int sum_n = 3;
    std::string sum_file;
    std::optional<double> sum_cutoff;
    bool sum_terms = false;
    auto* sum = app.add_subcommand("sum", "Sum F_n over an orthospectrum file");
    sum->add_option("-n", sum_n, "Dimension (n >= 2)")->required();
    sum->add_option("-f,--file", sum_file, "Spectrum file: `length [multiplicity]` per line, '-' for stdin")
        ->required();
    sum->add_option("--cutoff", sum_cutoff, "Only include lengths <= cutoff");
    sum->add_flag("--terms", sum_terms, "Print the per-entry breakdown");

    // table
    os::SweepSpec sweep;
    os::SweepColumns columns;
    std::string table_out = "-";
    std::string table_scale = "log";
    unsigned table_threads = std::max(1u, std::thread::hardware_concurrency());
    auto* table = app.add_subcommand("table", "Write a CSV sweep of F_n over l");
    table->add_option("-n", sweep.n, "Dimension (n >= 2)")->required();
    table->add_option("--lmin", sweep.l_min, "Smallest length")->required();
    table->add_option("--lmax", sweep.l_max, "Largest length")->required();
    table->add_option("--steps", sweep.steps, "Number of grid points (>= 2)")->capture_default_str();
    table->add_option("--scale", table_scale, "Grid spacing")
        ->check(CLI::IsMember({"linear", "log"}))
        ->capture_default_str();
    table->add_option("-o,--output", table_out, "Output path, '-' for stdout")->capture_default_str();
    table->add_flag("--figure", columns.figure, "Add K_over_l_pow and A_S_n comparison columns");
    table->add_option("--area", columns.area, "Area A for the A_S_n column")->capture_default_str();
    table->add_option("--threads", table_threads, "Worker threads")->check(CLI::PositiveNumber);

    // selftest
    std::string level = "fast";
    auto* selftest = app.add_subcommand("selftest", "Check the kernels against their oracles");
    selftest->add_option("--level", level, "fast or full")
        ->check(CLI::IsMember({"fast", "full"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : bad_argument;
    }

    try {
        g.cfg.validate();

        if (*fn) {
            std::cout << "n = " << fn_n << '\n' << "l = " << g.fmt(fn_l) << '\n';
            if (fn_form == "alt" && fn_n >= 3)
                print_kernel(g, "F_n", os::f_n_alt(fn_n, os::OrthoLength(fn_l), g.cfg));
            else
                print_kernel(g, "F_n", os::f_n(fn_n, fn_l, g.cfg));
        } else if (*mn) {
            os::KernelValue kv{os::m_closed(mn_n, mn_b), 0.0};
            if (mn_method == "single") kv = os::m_single_integral(mn_n, mn_b, g.cfg);
            if (mn_method == "integral") kv = os::m_defining_integral(mn_n, mn_b, g.cfg);
            std::cout << "n = " << mn_n << '\n' << "b = " << g.fmt(mn_b) << '\n';
            print_kernel(g, "M_n", kv);
        } else if (*kn) {
            const int lo = kn_n.value_or(3);
            const int hi = kn_n.value_or(12);
            if (lo < 3) throw std::domain_error("kn: requires n >= 3");
            std::cout << "n,K_n,D_n,large_l_coefficient\n";
            for (int n = lo; n <= hi; ++n)
                std::cout << n << ',' << g.fmt(os::k_constant(n)) << ',' << g.fmt(os::m_asymptotics(n).near_one) << ','
                          << g.fmt(os::large_l_coefficient(n)) << '\n';
        } else if (*bound) {
            const auto r = os::volume_bound(bound_n, bound_area, g.cfg);
            std::cout << "n = " << bound_n << '\n'
                      << "A = " << g.fmt(bound_area) << '\n'
                      << "x_star = " << g.fmt(r.x_star) << '\n'
                      << "H = " << g.fmt(r.H) << '\n'
                      << "power_floor = " << g.fmt(r.power_floor) << '\n';
        } else if (*sum) {
            os::OrthoSpectrum spectrum;
            if (sum_file == "-") {
                spectrum = os::parse_spectrum(std::cin);
            } else {
                std::ifstream in(sum_file);
                if (!in) throw IoError("cannot open spectrum file `" + sum_file + "`");
                spectrum = os::parse_spectrum(in);
            }
            const auto s = os::identity_sum(sum_n, spectrum, sum_cutoff, g.cfg);
            if (sum_terms) {
                std::cout << "length,multiplicity,F_n,err_estimate\n";
                for (const auto& t : s.terms)
                    std::cout << g.fmt(t.entry.length) << ',' << t.entry.multiplicity << ',' << g.fmt(t.kernel.value)
                              << ',' << g.fmt(t.kernel.err_estimate) << '\n';
            }
            std::cout << "entries = " << s.terms.size() << '\n'
                      << "total = " << g.fmt(s.total) << '\n'
                      << "err_estimate = " << g.fmt(s.err_estimate) << '\n';
        } else if (*table) {
            sweep.scale = table_scale == "linear" ? os::SweepScale::linear : os::SweepScale::log;
            const auto rows = os::run_sweep(sweep, columns, g.cfg, table_threads);
            if (table_out == "-") {
                os::write_sweep_csv(std::cout, rows, columns, g.digits);
            } else {
                std::ofstream out(table_out, std::ios::binary);
                if (!out) throw IoError("cannot open `" + table_out + "` for writing");
                os::write_sweep_csv(out, rows, columns, g.digits);
                out.flush();
                if (!out) throw IoError("write to `" + table_out + "` failed");
            }
        } else if (*selftest) {
            const auto results =
                os::run_selftest(level == "full" ? os::SelftestLevel::full : os::SelftestLevel::fast, g.cfg);
            bool all = true;
            for (const auto& r : results) {
                std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  (" << r.detail << ")\n";
                all = all && r.passed;
            }
            std::cout << (all ? "all properties hold\n" : "property failures detected\n");
            return all ? ok : selftest_failed;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return io_error;
    } catch (const os::NonConvergence& e) {
        std::cerr << "error: " << e.what() << " (best estimate " << g.fmt(e.partial().value) << " +- "
                  << g.fmt(e.partial().err_estimate) << ")\n";
        return no_convergence;
    } catch (const os::BracketingFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return no_convergence;
    } catch (const os::SpectrumParseError& e) {
        std::cerr << "error: " << sum_file << ": " << e.what() << '\n';
        return bad_argument;
    } catch (const std::logic_error& e) {  // domain_error, invalid_argument
        std::cerr << "error: " << e.what() << '\n';
        return bad_argument;
    }
    return ok;
}
