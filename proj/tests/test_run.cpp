#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "ks1d/errors.hpp"
#include "ks1d/run.hpp"

using namespace ks1d;
using namespace ks1d::test;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("ks1d_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// columns of a comma separated table; non-numeric or empty cells become NaN
std::vector<std::vector<double>> parse_table(const std::string& text, std::size_t columns) {
    std::vector<std::vector<double>> out(columns);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        std::vector<std::string> cells{""};
        for (char c : line) {
            if (c == ',')
                cells.emplace_back();
            else
                cells.back() += c;
        }
        REQUIRE(cells.size() == columns);
        for (std::size_t c = 0; c < columns; ++c) {
            try {
                out[c].push_back(std::stod(cells[c]));
            } catch (const std::exception&) {
                out[c].push_back(std::nan(""));
            }
        }
    }
    return out;
}

DeviceConfig small_benchmark(bool fermi = false) {
    DeviceConfig c;
    c.stack.layers = {Layer{}};
    c.grid_n = 200;
    c.tol_l1 = 1e-9;
    if (fermi) {
        c.zero_temperature = false;
        c.beta = 1.0;
    }
    return c;
}

}  // namespace

TEST_SUITE_BEGIN("run");

TEST_CASE("solve writes a profile that round-trips the conservation check") {
    const fs::path dir = fresh_dir("solve");
    RunOptions opts;
    opts.out_dir = dir;
    const DeviceConfig cfg = small_benchmark();
    CHECK(run_solve(cfg, opts) == exit_ok);

    const std::string profile = slurp(dir / "profile.csv");
    CHECK(profile.rfind("x,u,phi,v_eff\n", 0) == 0);
    const auto cols = parse_table(profile, 4);
    REQUIRE(cols[0].size() == cfg.grid_n + 1);

    // recompute the integral of u from the emitted table
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cols[0].size(); ++i)
        total += 0.5 * (cols[0][i + 1] - cols[0][i]) * (cols[1][i] + cols[1][i + 1]);
    CHECK(std::fabs(total - cfg.particles) <= 1e-8);

    const std::string summary = slurp(dir / "summary.txt");
    CHECK(summary.find("converged = true") != std::string::npos);
    CHECK(summary.find("mu = ") != std::string::npos);
    CHECK(summary.find("residual_history = ") != std::string::npos);
    CHECK(summary.find("check.apriori.pass = true") != std::string::npos);

    // the emitted integral reproduces the table recomputation
    const std::string key = "integral_u = ";
    const auto pos = summary.find(key);
    REQUIRE(pos != std::string::npos);
    const double reported = std::stod(summary.substr(pos + key.size()));
    CHECK(std::fabs(reported - total) <= 1e-10);
}

TEST_CASE("identical configurations produce byte-identical artifacts") {
    const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
    RunOptions oa, ob;
    oa.out_dir = a;
    ob.out_dir = b;
    const DeviceConfig cfg = small_benchmark(true);
    CHECK(run_solve(cfg, oa) == exit_ok);
    CHECK(run_solve(cfg, ob) == exit_ok);
    CHECK(slurp(a / "profile.csv") == slurp(b / "profile.csv"));
    CHECK(slurp(a / "summary.txt") == slurp(b / "summary.txt"));
}

TEST_CASE("uncharged solve emits the band offsets as v_eff") {
    DeviceConfig cfg;
    cfg.stack.layers = {Layer{0.4, 1, 1, 0.0}, Layer{0.2, 1, 1, 0.5}, Layer{0.4, 1, 1, 0.0}};
    cfg.charge = 0.0;
    cfg.grid_n = 40;
    cfg.damping = 1.0;
    const fs::path dir = fresh_dir("band");
    RunOptions opts;
    opts.out_dir = dir;
    CHECK(run_solve(cfg, opts) == exit_ok);

    const auto cols = parse_table(slurp(dir / "profile.csv"), 4);
    const Device d = cfg.device();
    const NodalField band = band_offset_potential(d);
    for (std::size_t i = 0; i < band.size(); ++i) CHECK(cols[3][i] == band[i]);
}

TEST_CASE("non-convergence is flagged through the exit status") {
    DeviceConfig cfg = small_benchmark();
    cfg.max_iter = 2;
    const fs::path dir = fresh_dir("nonconv");
    RunOptions opts;
    opts.out_dir = dir;
    CHECK(run_solve(cfg, opts) == exit_not_converged);
    CHECK(slurp(dir / "summary.txt").find("converged = false") != std::string::npos);
}

TEST_CASE("a single-point sweep reproduces the direct solve") {
    const fs::path solve_dir = fresh_dir("sw_single_solve");
    const fs::path sweep_dir = fresh_dir("sw_single_sweep");
    DeviceConfig cfg = small_benchmark(true);
    RunOptions opts;
    opts.out_dir = solve_dir;
    CHECK(run_solve(cfg, opts) == exit_ok);
    opts.out_dir = sweep_dir;
    CHECK(run_sweep(cfg, {"beta", {1.0}}, opts) == exit_ok);
    CHECK(slurp(solve_dir / "profile.csv") == slurp(sweep_dir / "point_000" / "profile.csv"));
}

TEST_CASE("particle sweeps raise the chemical potential") {
    const fs::path dir = fresh_dir("sw_n");
    RunOptions opts;
    opts.out_dir = dir;
    opts.workers = 2;
    CHECK(run_sweep(small_benchmark(), {"N", {1.0, 2.0, 3.0}}, opts) == exit_ok);
    const auto cols = parse_table(slurp(dir / "sweep.csv"), 12);
    REQUIRE(cols[5].size() == 3);
    CHECK(cols[5][0] < cols[5][1]);
    CHECK(cols[5][1] < cols[5][2]);
}

TEST_CASE("temperature sweeps report shrinking distances to zero temperature") {
    const fs::path dir = fresh_dir("sw_kt");
    RunOptions opts;
    opts.out_dir = dir;
    // kT comparable to the level gap (~3 pi^2), where the approach to the
    // zero-temperature solution is still resolvable in double precision
    CHECK(run_sweep(small_benchmark(), {"kT", {32.0, 8.0, 2.0, 0.5}}, opts) == exit_ok);
    const auto cols = parse_table(slurp(dir / "sweep.csv"), 14);
    REQUIRE(cols[12].size() == 4);
    for (std::size_t i = 0; i + 1 < 4; ++i) CHECK(cols[12][i + 1] < cols[12][i]);
    CHECK(fs::exists(dir / "zero_temperature" / "profile.csv"));
}

TEST_CASE("sweep rejects unknown parameters") {
    RunOptions opts;
    opts.out_dir = fresh_dir("sw_bad");
    CHECK_THROWS_AS((void)run_sweep(small_benchmark(), {"mass", {1.0}}, opts), ConfigError);
}

TEST_CASE("trace-only verification runs without PDE solves and reports constants") {
    const fs::path dir = fresh_dir("verify_trace");
    RunOptions opts;
    opts.out_dir = dir;
    opts.seed = 3;
    CHECK(run_verify(small_benchmark(true), {"trace"}, opts) == exit_ok);
    const std::string report = slurp(dir / "verify_report.txt");
    CHECK(report.find("trace.status = pass") != std::string::npos);
    CHECK(report.find("gamma = 1.414213") != std::string::npos);
    CHECK(report.find("bounds.") == std::string::npos);
    CHECK_THROWS_AS((void)run_verify(small_benchmark(), {"spectra"}, opts), ConfigError);
}

TEST_CASE("default verification passes on the benchmark well") {
    const fs::path dir = fresh_dir("verify_all");
    RunOptions opts;
    opts.out_dir = dir;
    opts.seed = 7;
    DeviceConfig cfg = small_benchmark(true);
    cfg.grid_n = 150;
    CHECK(run_verify(cfg, {}, opts) == exit_ok);
    const std::string report = slurp(dir / "verify_report.txt");
    for (const char* key :
         {"bounds.status = pass", "trace.status = pass", "monotonicity.status = pass",
          "apriori.status = pass", "uniqueness.status = pass", "distribution.status = pass"}) {
        CAPTURE(key);
        CHECK(report.find(key) != std::string::npos);
    }
    CHECK(report.find("bounds.rho_v_min = ") != std::string::npos);
    CHECK(report.find("apriori.M = ") != std::string::npos);
}

TEST_CASE("refinement study: coefficient jumps still give first-order densities") {
    DeviceConfig cfg;
    cfg.stack.layers = {Layer{0.5, 1.0, 1.0, 0.0}, Layer{0.5, 2.0, 2.0, 0.4}};
    cfg.grid_n = 0;  // overridden per point
    const fs::path dir = fresh_dir("conv_jump");
    RunOptions opts;
    opts.out_dir = dir;
    CHECK(run_convergence(cfg, {64, 128, 256, 512}, opts) == exit_ok);
    const auto cols = parse_table(slurp(dir / "convergence.csv"), 7);
    CHECK(cols[5][0] >= 1.0);
    CHECK(cols[5][1] >= 1.0);
}

TEST_CASE("command line round trip: exit codes and artifacts") {
    const fs::path dir = fresh_dir("cli");
    const fs::path cfg_path = dir / "well.cfg";
    {
        std::ofstream out(cfg_path);
        out << "[device.layer.1]\nthickness = 1.0\n\n[grid]\nn = 120\n";
    }
    const auto exit_code = [](int status) {
#ifdef WEXITSTATUS
        return WEXITSTATUS(status);
#else
        return status;
#endif
    };
    const std::string base = std::string(KS1D_CLI_PATH);
    const std::string solve = base + " solve --config " + cfg_path.string() + " --out " +
                              (dir / "out").string() + " >/dev/null 2>&1";
    CHECK(exit_code(std::system(solve.c_str())) == exit_ok);
    CHECK(fs::exists(dir / "out" / "profile.csv"));

    {
        std::ofstream out(cfg_path, std::ios::app);
        out << "[statistics]\ntype = fermi\n";  // fermi without beta or kT
    }
    CHECK(exit_code(std::system(solve.c_str())) == exit_invalid_config);

    const std::string missing = base + " solve --config " + (dir / "no_such.cfg").string() +
                                " >/dev/null 2>&1";
    CHECK(exit_code(std::system(missing.c_str())) != exit_ok);
}

TEST_CASE("refinement study: second-order eigenvalue and exact constant potential") {
    DeviceConfig cfg;
    cfg.stack.layers = {Layer{}};
    cfg.charge = 0.0;
    cfg.phi0 = cfg.phi1 = 0.7;
    cfg.damping = 1.0;
    const fs::path dir = fresh_dir("conv");
    RunOptions opts;
    opts.out_dir = dir;
    CHECK(run_convergence(cfg, {50, 100, 200, 400}, opts) == exit_ok);
    const auto cols = parse_table(slurp(dir / "convergence.csv"), 7);
    REQUIRE(cols[0].size() == 4);
    // lambda_1 self-convergence order stays near two
    CHECK(cols[3][0] >= 1.8);
    CHECK(cols[3][1] >= 1.8);
    // phi is the constant lift at every resolution
    for (std::size_t i = 0; i + 1 < 4; ++i) CHECK(cols[6][i] == 0.0);
    CHECK_THROWS_AS((void)run_convergence(cfg, {100, 50}, opts), ConfigError);
}

TEST_SUITE_END();
