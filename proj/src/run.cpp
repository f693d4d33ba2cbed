#include "ks1d/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "ks1d/analysis.hpp"
#include "ks1d/errors.hpp"
#include "ks1d/operators.hpp"
#include "ks1d/rng.hpp"

namespace ks1d {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(std::size_t v) { return std::to_string(v); }

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += fmt(values[i]);
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

std::string profile_table(const ScfResult& result) {
    const Grid& grid = *result.density.grid;
    std::string out = "x,u,phi,v_eff\n";
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        out += fmt(grid.node(i));
        out += ',';
        out += fmt(result.density[i]);
        out += ',';
        out += fmt(result.phi[i]);
        out += ',';
        out += fmt(result.v_eff[i]);
        out += '\n';
    }
    return out;
}

std::string summary_document(const ScfResult& result, const Device& device,
                             const DeviceConfig& config) {
    const AprioriReport apriori = check_apriori(result, device, config.scf());
    const double total = integrate(result.density);
    std::ostringstream out;
    out << "converged = " << (result.converged ? "true" : "false") << '\n';
    out << "iterations = " << result.iterations << '\n';
    out << "mu = " << fmt(result.occupation.mu) << '\n';
    out << "levels = " << result.spectrum.size() << '\n';
    out << "tail_bound = " << fmt(result.occupation.tail_bound) << '\n';
    out << "eigenvalues = " << join(result.spectrum.eigenvalues) << '\n';
    out << "occupations = " << join(result.occupation.occupations) << '\n';
    out << "residual_history = " << join(result.residual_history) << '\n';
    out << "fixed_point_residual = " << fmt(result.fixed_point_residual) << '\n';
    out << "integral_u = " << fmt(total) << '\n';
    out << "check.conservation = " << fmt(std::fabs(total - config.particles)) << '\n';
    out << "check.min_density = " << fmt(min_value(result.density)) << '\n';
    out << "check.poisson_residual = "
        << fmt(poisson_residual(device.grid, device.profile.eps, device.profile.doping,
                                result.density, config.charge, result.phi))
        << '\n';
    out << "check.apriori.lhs = " << fmt(apriori.lhs) << '\n';
    out << "check.apriori.rhs = " << fmt(apriori.rhs) << '\n';
    out << "check.apriori.pass = " << (apriori.pass ? "true" : "false") << '\n';
    return out.str();
}

struct SolveArtifacts {
    ScfResult result;
    Device device;
};

SolveArtifacts solve_config(const DeviceConfig& config) {
    SolveArtifacts a{ScfResult{}, config.device()};
    a.result = solve_scf(a.device, config.distribution(), config.xc, config.scf());
    return a;
}

void write_solve_artifacts(const std::filesystem::path& dir, const DeviceConfig& config,
                           const SolveArtifacts& a) {
    std::filesystem::create_directories(dir);
    write_file(dir / config.profile_name, profile_table(a.result));
    write_file(dir / config.summary_name, summary_document(a.result, a.device, config));
}

NodalField interpolate_to(const NodalField& f, const GridPtr& to) {
    const Grid& src = *f.grid;
    NodalField out(to);
    std::size_t e = 0;
    for (std::size_t i = 0; i < to->node_count(); ++i) {
        const double x = to->node(i);
        while (e + 1 < src.element_count() && src.node(e + 1) < x) ++e;
        const double a = src.node(e), b = src.node(e + 1);
        const double t = (x - a) / (b - a);
        out[i] = f[e] + t * (f[e + 1] - f[e]);
    }
    return out;
}

// Piecewise-constant random potential with a prescribed L1 norm.
NodalField random_potential(const GridPtr& grid, SplitMix64& rng, double l1_target) {
    const int segments = 4 + static_cast<int>(rng.below(5));
    std::vector<double> level(segments);
    for (double& v : level) v = rng.uniform(-1.0, 1.0);
    NodalField v(grid);
    for (std::size_t i = 0; i < v.size(); ++i) {
        int s = static_cast<int>(grid->node(i) * segments);
        s = std::min(s, segments - 1);
        v[i] = level[s];
    }
    const double norm = norm_l1(v);
    if (norm > 0.0) {
        const double scale = l1_target / norm;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] *= scale;
    }
    return v;
}

const char* status_text(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Inconclusive: return "inconclusive";
        default: return "fail";
    }
}

int thread_limit(const RunOptions& options) {
    return options.workers > 0 ? options.workers : max_threads();
}

}  // namespace

int run_solve(const DeviceConfig& config, const RunOptions& options) {
    const SolveArtifacts a = solve_config(config);
    write_solve_artifacts(options.out_dir, config, a);
    return a.result.converged ? exit_ok : exit_not_converged;
}

int run_sweep(const DeviceConfig& config, const SweepSpec& sweep, const RunOptions& options) {
    const std::string& p = sweep.parameter;
    const bool temperature = (p == "kT" || p == "beta");
    if (!temperature && p != "N" && p != "q" && p != "xc.C")
        throw ConfigError("sweep: parameter must be one of kT, beta, N, q, xc.C (got '" + p + "')");
    if (sweep.values.empty()) throw ConfigError("sweep: empty value list");

    std::vector<DeviceConfig> points;
    for (double value : sweep.values) {
        DeviceConfig point = config;
        if (p == "kT") {
            if (!(value > 0.0)) throw ConfigError("sweep: kT values must be positive");
            point.zero_temperature = false;
            point.beta = 1.0 / value;
        } else if (p == "beta") {
            if (!(value > 0.0)) throw ConfigError("sweep: beta values must be positive");
            point.zero_temperature = false;
            point.beta = value;
        } else if (p == "N") {
            point.particles = value;
        } else if (p == "q") {
            point.charge = value;
        } else {
            if (!point.xc.active())
                throw ConfigError("sweep: xc.C sweep requires an xalpha model in the config");
            point.xc.coupling = value;
        }
        points.push_back(std::move(point));
    }

    std::filesystem::create_directories(options.out_dir);

    // Zero-temperature reference for the distance columns of temperature sweeps.
    ScfResult reference;
    if (temperature) {
        DeviceConfig ref = config;
        ref.zero_temperature = true;
        const SolveArtifacts a = solve_config(ref);
        reference = a.result;
        write_solve_artifacts(options.out_dir / "zero_temperature", ref, a);
    }

    struct Row {
        bool solved = false;
        bool converged = false;
        std::size_t iterations = 0;
        double mu = std::numeric_limits<double>::quiet_NaN();
        std::vector<double> lambdas;
        double u_linf = std::numeric_limits<double>::quiet_NaN();
        double dist_u = std::numeric_limits<double>::quiet_NaN();
        double dist_phi = std::numeric_limits<double>::quiet_NaN();
        std::string error;
    };
    std::vector<Row> rows(points.size());

#ifdef _OPENMP
    const int previous = omp_get_max_threads();
    omp_set_num_threads(thread_limit(options));
#endif
    parallel_for(static_cast<std::ptrdiff_t>(points.size()), Exec::Parallel, [&](std::ptrdiff_t i) {
        Row& row = rows[i];
        char name[32];
        std::snprintf(name, sizeof name, "point_%03d", static_cast<int>(i));
        const std::filesystem::path dir = options.out_dir / name;
        try {
            const SolveArtifacts a = solve_config(points[i]);
            write_solve_artifacts(dir, points[i], a);
            row.solved = true;
            row.converged = a.result.converged;
            row.iterations = a.result.iterations;
            row.mu = a.result.occupation.mu;
            row.u_linf = max_abs(a.result.density);
            const DiscreteOperator op =
                assemble_schrodinger(a.device.grid, a.device.profile.mass, a.result.v_eff);
            const std::size_t levels = std::min<std::size_t>(5, op.dim());
            row.lambdas = lowest_eigenpairs(op, levels, Exec::Serial).eigenvalues;
            if (temperature) {
                NodalField du(a.result.density.grid);
                double linf = 0.0;
                for (std::size_t j = 0; j < du.size(); ++j) {
                    du[j] = a.result.density[j] - reference.density[j];
                    linf = std::max(linf, std::fabs(a.result.phi[j] - reference.phi[j]));
                }
                row.dist_u = norm_l1(du);
                row.dist_phi = linf;
            }
        } catch (const Error& e) {
            row.error = e.what();
            std::filesystem::create_directories(dir);
            write_file(dir / "error.txt", std::string(e.what()) + "\n");
        }
    });
#ifdef _OPENMP
    omp_set_num_threads(previous);
#endif

    std::string table = "index,parameter,value,converged,iterations,mu,lambda_1,lambda_2,lambda_3,"
                        "lambda_4,lambda_5,u_linf";
    if (temperature) table += ",dist_u_l1,dist_phi_linf";
    table += '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& row = rows[i];
        table += fmt(i) + ',' + p + ',' + fmt(sweep.values[i]) + ',';
        table += row.converged ? "true" : "false";
        table += ',' + fmt(row.iterations) + ',' + fmt(row.mu);
        for (std::size_t l = 0; l < 5; ++l)
            table += ',' + (l < row.lambdas.size()
                                ? fmt(row.lambdas[l])
                                : fmt(std::numeric_limits<double>::quiet_NaN()));
        table += ',' + fmt(row.u_linf);
        if (temperature) table += ',' + fmt(row.dist_u) + ',' + fmt(row.dist_phi);
        table += '\n';
    }
    write_file(options.out_dir / "sweep.csv", table);

    bool all_ok = true;
    for (const Row& row : rows) all_ok = all_ok && row.solved && row.converged;
    return all_ok ? exit_ok : exit_not_converged;
}

int run_verify(const DeviceConfig& config, const std::vector<std::string>& suites,
               const RunOptions& options) {
    std::vector<std::string> selected = suites;
    if (selected.empty())
        selected = {"bounds", "trace", "monotonicity", "apriori", "uniqueness", "distribution"};
    for (const std::string& s : selected)
        if (s != "bounds" && s != "trace" && s != "monotonicity" && s != "apriori" &&
            s != "uniqueness" && s != "distribution")
            throw ConfigError("verify: unknown suite '" + s +
                              "'; valid: bounds, trace, monotonicity, apriori, uniqueness, "
                              "distribution");
    const auto wants = [&](const char* name) {
        return std::find(selected.begin(), selected.end(), name) != selected.end();
    };

    std::ostringstream report;
    report << "seed = " << options.seed << '\n';
    report << "gamma = " << fmt(std::sqrt(2.0)) << '\n';

    if (wants("bounds")) {
        const Device device = config.device();
        const std::size_t levels =
            std::min<std::size_t>(20, device.grid->node_count() - 2);
        CheckStatus status = CheckStatus::Pass;
        double worst = std::numeric_limits<double>::infinity();
        double rho_min = 0.0, rho_max = -std::numeric_limits<double>::infinity();
        const int trials = 100;
        for (int t = 0; t < trials; ++t) {
            SplitMix64 rng(options.seed * 7919ULL + static_cast<std::uint64_t>(t));
            const NodalField v = random_potential(device.grid, rng, rng.uniform(0.2, 5.0));
            const BoundReport r = check_eigenvalue_bounds(device, v, levels);
            worst = std::min(worst, r.worst_margin);
            rho_min = std::min(rho_min, r.rho_v);
            rho_max = std::max(rho_max, r.rho_v);
            if (r.status == CheckStatus::Fail)
                status = CheckStatus::Fail;
            else if (r.status == CheckStatus::Inconclusive && status == CheckStatus::Pass)
                status = CheckStatus::Inconclusive;
        }
        report << "bounds.trials = " << trials << '\n';
        report << "bounds.levels = " << levels << '\n';
        report << "bounds.rho_v_min = " << fmt(rho_min) << '\n';
        report << "bounds.rho_v_max = " << fmt(rho_max) << '\n';
        report << "bounds.worst_margin = " << fmt(worst) << '\n';
        report << "bounds.status = " << status_text(status) << '\n';
    }

    if (wants("trace")) {
        const DistributionFunction f = config.distribution();
        const int trials = 100;
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            SplitMix64 rng(options.seed * 104729ULL + static_cast<std::uint64_t>(t));
            const int dim = 10 + static_cast<int>(rng.below(41));
            Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
            for (int i = 0; i < dim; ++i) {
                h(i, i) = rng.uniform(-2.0, 2.0);
                if (i + 1 < dim) h(i, i + 1) = h(i + 1, i) = rng.uniform(-1.0, 1.0);
            }
            Eigen::VectorXd u(dim), v(dim);
            for (int i = 0; i < dim; ++i) {
                u[i] = rng.uniform(-1.0, 1.0);
                v[i] = rng.uniform(-1.0, 1.0);
            }
            const TraceCheck c = check_trace_identity(h, u, v, f);
            worst = std::max(worst, c.gap / (1.0 + std::fabs(c.lhs)));
        }
        report << "trace.trials = " << trials << '\n';
        report << "trace.max_rel_gap = " << fmt(worst) << '\n';
        report << "trace.status = " << (worst <= 1e-10 ? "pass" : "fail") << '\n';
    }

    if (wants("monotonicity")) {
        const Device device = config.device();
        const DistributionFunction f = config.distribution();
        const int trials = 100;
        double worst = -std::numeric_limits<double>::infinity();
        for (int t = 0; t < trials; ++t) {
            SplitMix64 rng(options.seed * 19991ULL + static_cast<std::uint64_t>(t));
            const NodalField u_pot = random_potential(device.grid, rng, rng.uniform(0.2, 3.0));
            const NodalField v_pot = random_potential(device.grid, rng, rng.uniform(0.2, 3.0));
            const double integral =
                check_monotonicity(device, u_pot, v_pot, f, config.particles, config.tail_tol);
            NodalField diff(device.grid);
            for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = u_pot[i] - v_pot[i];
            const double l2 = norm_l2(diff);
            worst = std::max(worst, integral / (1.0 + l2 * l2));
        }
        report << "monotonicity.trials = " << trials << '\n';
        report << "monotonicity.worst_normalized = " << fmt(worst) << '\n';
        report << "monotonicity.status = " << (worst <= 1e-8 ? "pass" : "fail") << '\n';
    }

    if (wants("apriori")) {
        const Device device = config.device();
        const ScfResult result =
            solve_scf(device, config.distribution(), config.xc, config.scf());
        const AprioriReport r = check_apriori(result, device, config.scf());
        report << "apriori.M = " << fmt(r.monotonicity_constant) << '\n';
        report << "apriori.dopant_dual_norm = " << fmt(r.dopant_dual_norm) << '\n';
        report << "apriori.lhs = " << fmt(r.lhs) << '\n';
        report << "apriori.rhs = " << fmt(r.rhs) << '\n';
        report << "apriori.converged = " << (result.converged ? "true" : "false") << '\n';
        report << "apriori.status = " << (r.pass ? "pass" : "fail") << '\n';
    }

    if (wants("uniqueness")) {
        const Device device = config.device();
        const UniquenessReport r =
            check_uniqueness(device, config.distribution(), config.scf(), 3, options.seed);
        report << "uniqueness.starts = 3\n";
        report << "uniqueness.max_distance = " << fmt(r.max_distance) << '\n';
        report << "uniqueness.all_converged = " << (r.all_converged ? "true" : "false") << '\n';
        report << "uniqueness.status = "
               << ((r.all_converged && r.max_distance <= 10.0 * config.tol_l1) ? "pass" : "fail")
               << '\n';
    }

    if (wants("distribution")) {
        std::vector<double> betas;
        for (int j = 0; j <= 16; ++j) betas.push_back(std::ldexp(1.0, j));
        const std::vector<double> d = check_distribution_limit(betas, -2.0);
        bool decreasing = true;
        for (std::size_t j = 0; j + 1 < d.size(); ++j) decreasing = decreasing && d[j + 1] < d[j];
        report << "distribution.betas = " << join(betas) << '\n';
        report << "distribution.distances = " << join(d) << '\n';
        report << "distribution.final = " << fmt(d.back()) << '\n';
        report << "distribution.status = "
               << ((decreasing && d.back() <= 1e-3) ? "pass" : "fail") << '\n';
    }

    std::filesystem::create_directories(options.out_dir);
    write_file(options.out_dir / "verify_report.txt", report.str());
    std::cout << report.str();
    return exit_ok;
}

int run_convergence(const DeviceConfig& config, const std::vector<std::size_t>& n_list,
                    const RunOptions& options) {
    if (n_list.size() < 2) throw ConfigError("convergence: need at least two grid sizes");
    for (std::size_t i = 0; i + 1 < n_list.size(); ++i)
        if (!(n_list[i] < n_list[i + 1]))
            throw ConfigError("convergence: grid sizes must be strictly ascending");

    struct Entry {
        std::size_t n;
        double lambda1;
        NodalField u, phi;
    };
    std::vector<Entry> entries;
    for (std::size_t n : n_list) {
        DeviceConfig point = config;
        point.grid_n = n;
        const SolveArtifacts a = solve_config(point);
        entries.push_back(
            {n, a.result.spectrum.eigenvalues.front(), a.result.density, a.result.phi});
    }

    const Entry& finest = entries.back();
    std::vector<double> lambda_err(entries.size(), 0.0), u_err(entries.size(), 0.0),
        phi_err(entries.size(), 0.0);
    for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
        lambda_err[i] = std::fabs(entries[i].lambda1 - finest.lambda1);
        const NodalField u_i = interpolate_to(entries[i].u, finest.u.grid);
        const NodalField phi_i = interpolate_to(entries[i].phi, finest.phi.grid);
        NodalField du(finest.u.grid);
        double linf = 0.0;
        for (std::size_t j = 0; j < du.size(); ++j) {
            du[j] = u_i[j] - finest.u[j];
            linf = std::max(linf, std::fabs(phi_i[j] - finest.phi[j]));
        }
        u_err[i] = norm_l1(du);
        phi_err[i] = linf;
    }

    const auto order = [&](const std::vector<double>& err, std::size_t i) -> std::string {
        if (i + 2 >= entries.size()) return "";
        if (!(err[i] > 0.0) || !(err[i + 1] > 0.0)) return "";
        const double rate = std::log(err[i] / err[i + 1]) /
                            std::log(static_cast<double>(entries[i + 1].n) /
                                     static_cast<double>(entries[i].n));
        return fmt(rate);
    };

    std::string table = "n,lambda_1,lambda1_err,lambda1_order,u_l1_err,u_order,phi_linf_err\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const bool last = (i + 1 == entries.size());
        table += fmt(entries[i].n) + ',' + fmt(entries[i].lambda1) + ',';
        table += (last ? "" : fmt(lambda_err[i])) + ',';
        table += order(lambda_err, i) + ',';
        table += (last ? "" : fmt(u_err[i])) + ',';
        table += order(u_err, i) + ',';
        table += (last ? "" : fmt(phi_err[i]));
        table += '\n';
    }
    std::filesystem::create_directories(options.out_dir);
    write_file(options.out_dir / "convergence.csv", table);
    std::cout << table;
    return exit_ok;
}

}  // namespace ks1d
