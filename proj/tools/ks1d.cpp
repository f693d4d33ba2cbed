#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ks1d/errors.hpp"
#include "ks1d/run.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    int workers = 0;
    std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "device configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--workers", args.workers, "worker limit for concurrent solves (0 = auto)");
    cmd->add_option("--seed", args.seed, "seed for randomized verifications");
}

ks1d::RunOptions options_from(const CommonArgs& args) {
    ks1d::RunOptions options;
    options.out_dir = args.out_dir;
    options.workers = args.workers;
    options.seed = args.seed;
    return options;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-consistent Schroedinger-Poisson solver for layered 1D nanostructures"};
    app.require_subcommand(1);

    CommonArgs solve_args, sweep_args, verify_args, conv_args;

    CLI::App* solve = app.add_subcommand("solve", "solve the configured device");
    add_common(solve, solve_args);

    CLI::App* sweep = app.add_subcommand("sweep", "independent solves over a parameter sweep");
    add_common(sweep, sweep_args);
    std::string sweep_param;
    std::vector<double> sweep_values;
    sweep->add_option("--param", sweep_param, "swept parameter: kT | beta | N | q | xc.C")
        ->required();
    sweep->add_option("--values", sweep_values, "comma separated sweep values")
        ->required()
        ->delimiter(',');

    CLI::App* verify = app.add_subcommand("verify", "numerical verification suites");
    add_common(verify, verify_args);
    std::vector<std::string> suites;
    verify
        ->add_option("--suite", suites,
                     "subset of: bounds,trace,monotonicity,apriori,uniqueness,distribution")
        ->delimiter(',');

    CLI::App* conv = app.add_subcommand("convergence", "grid refinement study");
    add_common(conv, conv_args);
    std::vector<std::size_t> n_list;
    conv->add_option("--n-list", n_list, "ascending element counts, comma separated")
        ->required()
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed())
            return ks1d::run_solve(ks1d::load_config(solve_args.config_path),
                                   options_from(solve_args));
        if (sweep->parsed())
            return ks1d::run_sweep(ks1d::load_config(sweep_args.config_path),
                                   {sweep_param, sweep_values}, options_from(sweep_args));
        if (verify->parsed())
            return ks1d::run_verify(ks1d::load_config(verify_args.config_path), suites,
                                    options_from(verify_args));
        return ks1d::run_convergence(ks1d::load_config(conv_args.config_path), n_list,
                                     options_from(conv_args));
    } catch (const ks1d::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ks1d::exit_invalid_config;
    } catch (const ks1d::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ks1d::exit_numerical_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ks1d::exit_numerical_failure;
    }
}
