#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ssa_autogroup/cli.hpp"
#include "ssa_autogroup/csv.hpp"

namespace fs = std::filesystem;
using ssa_autogroup::cli::run;

namespace {

const fs::path kFixture = fs::path(SSA_TEST_DATA_DIR) / "f1_snr5.csv";

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& tag) {
    std::random_device rd;
    const fs::path dir = fs::temp_directory_path() / ("ssa_cli_" + tag + "_" + std::to_string(rd()));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_series(const fs::path& dir, const std::string& name, double value, int n) {
    const fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << "v\n";
    for (int i = 0; i < n; ++i) {
        out << value << "\n";
    }
    return p;
}

} // namespace

TEST_CASE("usage errors exit with 2") {
    const auto missing = invoke({"analyze", "--value-col", "value"});
    CHECK(missing.code == ssa_autogroup::cli::kExitUsage);
    CHECK(missing.err.find("--input") != std::string::npos);

    CHECK(invoke({}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({"simulate", "--reps", "0"}).code == 2);
    CHECK(invoke({"simulate", "--reps", "1", "--signals", "f9"}).code == 2);
    CHECK(invoke({"simulate", "--reps", "1", "--B", "10"}).code == 2);
    CHECK(invoke({"analyze", "--input", "/nonexistent.csv", "--value-col", "v"}).code == 2);
    CHECK(invoke({"analyze", "--input", kFixture.string(), "--value-col", "value", "--window", "40"}).code == 2);
    CHECK(invoke({"analyze", "--input", kFixture.string(), "--value-col", "value", "--aux", "a4"}).code == 2);
    CHECK(invoke({"analyze", "--input", kFixture.string(), "--value-col", "value", "--correction", "bh"}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("analyze the period-3 fixture") {
    const fs::path dir = scratch_dir("analyze");
    const auto res = invoke({"analyze", "--input", kFixture.string(), "--value-col", "value", "--label-col", "t",
                             "--window", "25", "--seed", "7", "--out-dir", dir.string()});
    REQUIRE(res.code == 0);
    CHECK(res.out.find("g_hat=2\n") != std::string::npos);
    CHECK(res.out.find("g_hc=2\n") != std::string::npos);

    const std::string kv = slurp(dir / "report.kv");
    CHECK(kv.starts_with("g_hat=2\n"));
    for (const auto* key : {"correction=holm\n", "alpha=0.10000000000000001\n", "seed=7\n", "N=50\n", "L=25\n",
                            "ell=2\n", "B=1000\n", "window=triangle\n", "aux=gaussian\n"}) {
        CHECK(kv.find(key) != std::string::npos);
    }

    const auto signal = ssa_autogroup::load_csv({dir / "signal.csv", "signal"});
    const auto original = ssa_autogroup::load_csv({dir / "signal.csv", "original"});
    const auto residual = ssa_autogroup::load_csv({dir / "signal.csv", "residual"});
    const auto input = ssa_autogroup::load_csv({kFixture, "value"});
    CHECK(original.values() == input.values());
    const Eigen::VectorXd gap = original.values() - signal.values() - residual.values();
    CHECK(gap.cwiseAbs().maxCoeff() <= 1e-8 * original.values().cwiseAbs().maxCoeff());

    const std::string wc = slurp(dir / "wcorr.csv");
    CHECK(std::count(wc.begin(), wc.end(), '\n') == 25);
    CHECK(wc.starts_with("1,"));
    fs::remove_all(dir);
}

TEST_CASE("config file values are overridden by flags") {
    const fs::path dir = scratch_dir("config");
    const fs::path cfg = dir / "boot.cfg";
    std::ofstream(cfg) << "# test\nB = 199\nseed = 3\nwindow = trapezoid043\nell = 3\n";
    const auto res = invoke({"analyze", "--input", kFixture.string(), "--value-col", "value", "--config",
                             cfg.string(), "--seed", "11", "--out-dir", dir.string()});
    REQUIRE(res.code == 0);
    const std::string kv = slurp(dir / "report.kv");
    CHECK(kv.find("B=199\n") != std::string::npos);
    CHECK(kv.find("seed=11\n") != std::string::npos);
    CHECK(kv.find("window=trapezoid043\n") != std::string::npos);
    CHECK(kv.find("ell=3\n") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("outputs are byte-identical across runs") {
    const fs::path a = scratch_dir("a");
    const fs::path b = scratch_dir("b");
    for (const auto& dir : {a, b}) {
        REQUIRE(invoke({"analyze", "--input", kFixture.string(), "--value-col", "value", "--seed", "99", "--B", "299",
                        "--out-dir", dir.string()})
                    .code == 0);
    }
    for (const auto* name : {"report.txt", "report.kv", "signal.csv", "wcorr.csv"}) {
        CHECK(slurp(a / name) == slurp(b / name));
    }
    fs::remove_all(a);
    fs::remove_all(b);

    const std::vector<std::string> sim{"simulate", "--signals", "f2", "--snr", "5", "--reps", "4", "--B", "199",
                                       "--seed", "5"};
    const auto first = invoke(sim);
    const auto second = invoke(sim);
    REQUIRE(first.code == 0);
    CHECK(first.out == second.out);
    CHECK(first.out.starts_with("signal,snr,reps,mean_g_hat,sd_g_hat,fwer_hat,mean_g_hc,sd_g_hc,g_star\nf2,5,4,"));
}

TEST_CASE("wcorr command") {
    const fs::path dir = scratch_dir("wcorr");
    const auto constant = write_series(dir, "constant.csv", 2.5, 20);
    const auto res = invoke({"wcorr", "--input", constant.string(), "--value-col", "v", "--window", "10"});
    CHECK(res.code == 0);
    CHECK(res.out == "1\n");

    const auto zero = write_series(dir, "zero.csv", 0.0, 20);
    const auto bad = invoke({"wcorr", "--input", zero.string(), "--value-col", "v"});
    CHECK(bad.code == ssa_autogroup::cli::kExitNumerical);
    CHECK(bad.err.find("d = 0") != std::string::npos);

    const fs::path out = dir / "m.csv";
    CHECK(invoke({"wcorr", "--input", kFixture.string(), "--value-col", "value", "--window", "7", "--out",
                  out.string()})
              .code == 0);
    const std::string m = slurp(out);
    CHECK(std::count(m.begin(), m.end(), '\n') == 7);
    fs::remove_all(dir);
}

TEST_CASE("installed executable reports exit codes") {
    const std::string exe = SSA_CLI_EXE;
    CHECK(std::system((exe + " analyze --value-col v > /dev/null 2>&1").c_str()) != 0);
    CHECK(std::system((exe + " --help > /dev/null 2>&1").c_str()) == 0);
    const int status = std::system((exe + " simulate --reps 0 > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(status) == 2);
}
