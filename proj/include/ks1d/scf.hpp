#pragma once

#include <optional>
#include <vector>

#include "ks1d/device.hpp"
#include "ks1d/statistics.hpp"
#include "ks1d/xc.hpp"

namespace ks1d {

struct ScfConfig {
    double particles = 1.0;
    double charge = 1.0;  // q
    double damping = 0.3;  // tau in (0, 1]
    double tol_l1 = 1e-9;
    std::size_t max_iter = 200;
    double tail_tol = 1e-10;
    bool adaptive_damping = false;

    void validate() const;
};

struct ScfResult {
    NodalField density;  // u
    NodalField phi;      // electrostatic potential, contact values included
    NodalField v_eff;    // Delta E + V_xc(u) - q phi
    Spectrum spectrum;
    OccupationSummary occupation;
    std::vector<double> residual_history;  // ||u_{k+1} - u_k||_L1 per iteration
    std::vector<double> damping_history;   // tau in effect at each iteration
    double fixed_point_residual = 0.0;     // ||Phi(u) - u||_L1 at the final iterate
    std::size_t iterations = 0;
    bool converged = false;
};

// V(u) = Delta E + V_xc(u) - q phi(u).
NodalField effective_potential(const NodalField& density, const Device& device, const XcModel& xc,
                               const ScfConfig& config);

// One application of the Kohn-Sham map Phi(u) = N_f(V(u)); maps the set
// {u >= 0, integral u = N} into itself.
NodalField kohn_sham_map(const NodalField& density, const Device& device,
                         const DistributionFunction& f, const XcModel& xc,
                         const ScfConfig& config);

// Damped fixed-point iteration u <- (1-tau) u + tau Phi(u). Exhausting
// max_iter flags the result as not converged; it does not throw.
ScfResult solve_scf(const Device& device, const DistributionFunction& f, const XcModel& xc,
                    const ScfConfig& config, const std::optional<NodalField>& initial = {});

struct ContinuationStage {
    double beta;  // +infinity marks the zero-temperature stage
    ScfResult result;
    double distance_u_l1;     // to the zero-temperature solution
    double distance_phi_linf;
};

struct ContinuationResult {
    std::vector<ContinuationStage> stages;
    ScfResult zero_temperature;
};

// Solves along a strictly increasing beta schedule, warm-starting every stage
// from the previous solution; the final entry may be +infinity.
ContinuationResult temperature_continuation(const Device& device, const std::vector<double>& betas,
                                            const XcModel& xc, const ScfConfig& config);

}  // namespace ks1d
