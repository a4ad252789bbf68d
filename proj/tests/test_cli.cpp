#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("orthospectrum_cli_" + std::string(info->name()) + "_" +
                                            std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path path(const std::string& name) const { return dir_ / name; }

    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }

    CliResult run(const std::string& args) const {
        const auto err_file = path("stderr.txt");
        const std::string cmd = std::string("'") + ORTHOSPECTRUM_CLI + "' " + args + " 2>'" + err_file.string() + "'";
        FILE* pipe = ::popen(cmd.c_str(), "r");
        if (pipe == nullptr) return {-1, "", "popen failed"};
        std::string out;
        char buf[4096];
        std::size_t n = 0;
        while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
        const int status = ::pclose(pipe);
        std::ifstream ef(err_file);
        std::stringstream err;
        err << ef.rdbuf();
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, err.str()};
    }

private:
    fs::path dir_;
};

// Value printed on a `key = value` line.
double field(const std::string& out, const std::string& key) {
    std::istringstream in(out);
    std::string line;
    const std::string prefix = key + " = ";
    while (std::getline(in, line))
        if (line.rfind(prefix, 0) == 0) {
            double v = 0.0;
            const std::string s = line.substr(prefix.size());
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            EXPECT_EQ(res.ec, std::errc{}) << line;
            return v;
        }
    ADD_FAILURE() << "no `" << key << "` line in:\n" << out;
    return std::nan("");
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

double cell(const std::string& line, std::size_t column) {
    std::size_t start = 0;
    for (std::size_t i = 0; i < column; ++i) start = line.find(',', start) + 1;
    const auto end = line.find(',', start);
    const std::string s = line.substr(start, end == std::string::npos ? std::string::npos : end - start);
    double v = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

constexpr double pi = std::numbers::pi;

}  // namespace

TEST_F(Cli, FnTwoDimensionsNearZero) {
    const auto r = run("fn -n 2 -l 0.0001");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(field(r.out, "F_n"), 2.0944, 1e-4);
    EXPECT_EQ(field(r.out, "err_estimate"), 0.0);
}

TEST_F(Cli, FnThreeDimensionsNearZero) {
    const auto r = run("fn -n 3 -l 0.0001");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(field(r.out, "F_n"), 15707.96, 0.5e-3 * 15707.96);
    EXPECT_GT(field(r.out, "err_estimate"), 0.0);
}

TEST_F(Cli, FnAlternateForm) {
    const auto a = run("fn -n 4 -l 1 --form alt");
    const auto b = run("fn -n 4 -l 1");
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_NEAR(field(a.out, "F_n"), field(b.out, "F_n"), 1e-8 * field(b.out, "F_n"));
}

TEST_F(Cli, FnInvalidArgumentsExitTwo) {
    EXPECT_EQ(run("fn -n 3 -l -1").code, 2);
    EXPECT_EQ(run("fn -n 3 -l 0").code, 2);
    EXPECT_EQ(run("fn -n 1 -l 1").code, 2);
    EXPECT_EQ(run("fn -n 3").code, 2);
    EXPECT_EQ(run("fn -n three -l 1").code, 2);
    EXPECT_EQ(run("--rtol -1 fn -n 3 -l 1").code, 2);
    EXPECT_EQ(run("--maxsub 0 fn -n 3 -l 1").code, 2);
}

TEST_F(Cli, FnNonConvergenceExitThree) {
    const auto r = run("--rtol 1e-16 --atol 1e-300 --maxsub 1 fn -n 5 -l 0.7");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("best estimate"), std::string::npos);
}

TEST_F(Cli, DigitsFlagShortensOutput) {
    const auto r = run("--digits 5 fn -n 2 -l 0.0001");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("F_n = 2.0944\n"), std::string::npos) << r.out;
    EXPECT_EQ(run("--digits 0 fn -n 2 -l 1").code, 2);
    EXPECT_EQ(run("--digits 18 fn -n 2 -l 1").code, 2);
}

TEST_F(Cli, MnMethods) {
    const auto closed = run("mn -n 3 -b 2");
    ASSERT_EQ(closed.code, 0) << closed.err;
    const double m3 = 2.0 / 3.0 * (1.0 - std::log(2.0)) + 0.75 * std::log(3.0);
    EXPECT_NEAR(field(closed.out, "M_n"), m3, 1e-14);
    const auto single = run("mn -n 6 -b 3 --method single");
    const auto integral = run("mn -n 6 -b 3 --method integral");
    const auto ref = run("mn -n 6 -b 3");
    ASSERT_EQ(single.code, 0) << single.err;
    ASSERT_EQ(integral.code, 0) << integral.err;
    EXPECT_NEAR(field(single.out, "M_n"), field(ref.out, "M_n"), 1e-9 * field(ref.out, "M_n"));
    EXPECT_NEAR(field(integral.out, "M_n"), field(ref.out, "M_n"), 1e-6 * field(ref.out, "M_n"));
    EXPECT_EQ(run("mn -n 3 -b 1").code, 2);
    EXPECT_EQ(run("mn -n 2 -b 3").code, 2);
    EXPECT_EQ(run("mn -n 3 -b 3 --method guess").code, 2);
}

TEST_F(Cli, KnTable) {
    const auto r = run("kn");
    ASSERT_EQ(r.code, 0);
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 11u);
    EXPECT_EQ(ls[0], "n,K_n,D_n,large_l_coefficient");
    EXPECT_NEAR(cell(ls[1], 1), pi / 2.0, 1e-15);
    EXPECT_NEAR(cell(ls[2], 1), 1.0, 1e-15);
    EXPECT_NEAR(cell(ls[1], 3), pi, 1e-14);
    const auto one = run("kn -n 5");
    ASSERT_EQ(lines(one.out).size(), 2u);
    EXPECT_NEAR(cell(lines(one.out)[1], 1), 11.0 * pi * pi / 192.0, 1e-15);
    EXPECT_NEAR(cell(lines(one.out)[1], 2), 11.0 / 36.0, 1e-15);
    EXPECT_EQ(run("kn -n 2").code, 2);
}

TEST_F(Cli, BoundSphereArea) {
    const auto r = run("bound -n 3 -A 12.566370614");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(field(r.out, "H"), 2.986, 0.01 * 2.986);
    EXPECT_NEAR(field(r.out, "x_star"), 0.2333, 1e-4);
    EXPECT_NEAR(field(r.out, "power_floor"), pi, 1e-9);
}

TEST_F(Cli, BoundArgumentsAndMonotonicity) {
    EXPECT_EQ(run("bound -n 3 -A 0").code, 2);
    EXPECT_EQ(run("bound -n 2 -A 1").code, 2);
    const auto big = run("bound -n 4 -A 100");
    const auto small = run("bound -n 4 -A 10");
    ASSERT_EQ(big.code, 0);
    ASSERT_EQ(small.code, 0);
    EXPECT_GT(field(big.out, "H"), field(small.out, "H"));
}

TEST_F(Cli, BoundBracketingFailureExitThree) { EXPECT_EQ(run("bound -n 3 -A 1e30").code, 3); }

TEST_F(Cli, SumEmptyFile) {
    const auto f = write("empty.txt", "");
    const auto r = run("sum -n 3 -f '" + f.string() + "'");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(field(r.out, "total"), 0.0);
    EXPECT_EQ(field(r.out, "entries"), 0.0);
}

TEST_F(Cli, SumMultiplicity) {
    const auto f = write("one.txt", "1.0 2\n");
    const auto r = run("sum -n 3 -f '" + f.string() + "'");
    const auto single = run("fn -n 3 -l 1.0");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(field(r.out, "total"), 2.0 * field(single.out, "F_n"));
}

TEST_F(Cli, SumIsCompositional) {
    const auto f = write("three.txt", "# three lengths\n0.5\n1.0\n\n1.5\n");
    const auto r = run("sum -n 3 -f '" + f.string() + "'");
    ASSERT_EQ(r.code, 0) << r.err;
    double sum = 0.0;
    for (const char* l : {"0.5", "1.0", "1.5"}) sum += field(run(std::string("fn -n 3 -l ") + l).out, "F_n");
    EXPECT_NEAR(field(r.out, "total"), sum, 1e-12 * sum);
}

TEST_F(Cli, SumTermsCutoffAndStdin) {
    const auto f = write("spec.txt", "0.5 3\n1.0\n2.0 5\n");
    const auto r = run("sum -n 4 --terms --cutoff 1.5 -f '" + f.string() + "'");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_GE(ls.size(), 3u);
    EXPECT_EQ(ls[0], "length,multiplicity,F_n,err_estimate");
    EXPECT_EQ(field(r.out, "entries"), 2.0);
    const auto piped = run("sum -n 4 --cutoff 1.5 -f - < '" + f.string() + "'");
    ASSERT_EQ(piped.code, 0) << piped.err;
    EXPECT_EQ(field(piped.out, "total"), field(r.out, "total"));
}

TEST_F(Cli, SumMalformedFileReportsLine) {
    const auto f = write("bad.txt", "1.0\n# ok\n0.5 x\n");
    const auto r = run("sum -n 3 -f '" + f.string() + "'");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST_F(Cli, SumMissingFileIsIoError) { EXPECT_EQ(run("sum -n 3 -f '" + path("missing.txt").string() + "'").code, 4); }

TEST_F(Cli, TableLogSweep) {
    const auto out = path("f3.csv");
    const auto r = run("table -n 3 --lmin 0.1 --lmax 5 --steps 50 --scale log -o '" + out.string() + "'");
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream in(out);
    std::stringstream text;
    text << in.rdbuf();
    const auto ls = lines(text.str());
    ASSERT_EQ(ls.size(), 51u);
    EXPECT_EQ(ls[0], "l,F_n,err_estimate");
    for (std::size_t i = 2; i < ls.size(); ++i) EXPECT_LT(cell(ls[i], 1), cell(ls[i - 1], 1));
    EXPECT_EQ(cell(ls[1], 0), 0.1);
    EXPECT_EQ(cell(ls[50], 0), 5.0);
}

TEST_F(Cli, TableTwoStepsAndTwoDimensions) {
    const auto r = run("table -n 2 --lmin 0.5 --lmax 3 --steps 2 --scale linear");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 3u);
    EXPECT_EQ(cell(ls[1], 0), 0.5);
    EXPECT_EQ(cell(ls[2], 0), 3.0);
    EXPECT_EQ(cell(ls[1], 2), 0.0);
    EXPECT_EQ(cell(ls[2], 2), 0.0);
}

TEST_F(Cli, TableFigureColumnsRoundTrip) {
    const auto r = run("table -n 3 --lmin 0.2 --lmax 2 --steps 5 --figure --area 12.566370614359172");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    EXPECT_EQ(ls[0], "l,F_n,err_estimate,K_over_l_pow,A_S_n");
    // the F_n column re-parses to exactly the value fn prints at full precision
    const auto single = run("fn -n 3 -l 0.2");
    EXPECT_EQ(cell(ls[1], 1), field(single.out, "F_n"));
}

TEST_F(Cli, TableErrors) {
    EXPECT_EQ(run("table -n 3 --lmin 0.1 --lmax 5 -o /nonexistent-dir/out.csv").code, 4);
    EXPECT_EQ(run("table -n 3 --lmin 5 --lmax 1").code, 2);
    EXPECT_EQ(run("table -n 3 --lmin 0.1 --lmax 1 --steps 1").code, 2);
    EXPECT_EQ(run("table -n 3 --lmin 0.1 --lmax 1 --scale cubic").code, 2);
}

TEST_F(Cli, SelftestFast) {
    const auto r = run("selftest --level fast");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
    EXPECT_EQ(run("selftest --level extreme").code, 2);
}

TEST_F(Cli, UsageErrorsAndHelp) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("--help").code, 0);
    EXPECT_EQ(run("fn --help").code, 0);
}
