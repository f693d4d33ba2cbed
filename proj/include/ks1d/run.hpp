#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ks1d/config.hpp"

namespace ks1d {

inline constexpr int exit_ok = 0;
inline constexpr int exit_not_converged = 2;
inline constexpr int exit_invalid_config = 3;
inline constexpr int exit_numerical_failure = 4;

struct RunOptions {
    std::filesystem::path out_dir = "out";
    int workers = 0;  // 0: hardware default
    std::uint64_t seed = 1;
};

// Solves the configured device and writes profile + summary artifacts.
// Returns exit_ok or exit_not_converged; artifacts are written either way.
int run_solve(const DeviceConfig& config, const RunOptions& options);

struct SweepSpec {
    std::string parameter;  // kT | beta | N | q | xc.C
    std::vector<double> values;
};

// Independent solves over the swept values (parallel up to the worker limit),
// per-point artifacts plus an aggregate table. Temperature sweeps also report
// distances to the zero-temperature solution.
int run_sweep(const DeviceConfig& config, const SweepSpec& sweep, const RunOptions& options);

// Numerical verification suites: bounds, trace, monotonicity, apriori,
// uniqueness, distribution. Empty selection runs all. Failures are report
// content, not an exit status.
int run_verify(const DeviceConfig& config, const std::vector<std::string>& suites,
               const RunOptions& options);

// Eigenvalue/density/potential self-convergence table over a grid refinement
// sequence.
int run_convergence(const DeviceConfig& config, const std::vector<std::size_t>& n_list,
                    const RunOptions& options);

}  // namespace ks1d
