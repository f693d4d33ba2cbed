#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ks1d/scf.hpp"

namespace ks1d {

enum class CheckStatus { Pass, Inconclusive, Fail };

// Sandwich bounds for the eigenvalues of H_V in terms of the spectrum of H_0:
//   (s_l + 1)/2 + rho_V  <=  lambda_l(V)  <=  3(s_l + 1)/2 - rho_V - 2
// with rho_V = -2 ||V||_L1^2 m_bar - 1.
struct BoundReport {
    std::vector<double> lower, upper, observed;
    double rho_v = 0.0;
    double m_bar = 1.0;
    double worst_margin = 0.0;  // min over l of the distance to the nearer bound
    CheckStatus status = CheckStatus::Pass;

    bool pass() const { return status == CheckStatus::Pass; }
};

BoundReport check_eigenvalue_bounds(const Device& device, const NodalField& potential,
                                    std::size_t levels);

// tr([f(H+U) - f(H+V)](U-V)) evaluated two ways: through the matrix functions
// (lhs) and through the eigenpair-overlap double sum (rhs).
struct TraceCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
};

TraceCheck check_trace_identity(const Eigen::MatrixXd& h, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& v, const DistributionFunction& f);

// integral of (N_f(U) - N_f(V)) (U - V); nonpositive up to discretization noise.
double check_monotonicity(const Device& device, const NodalField& u_pot, const NodalField& v_pot,
                          const DistributionFunction& f, double particles, double tail_tol = 1e-10);

// ||phi - lift||_W12 <= (1/M)(||D||_{W^-12} + gamma N q) with M = ess inf eps / 2
// and gamma = sqrt(2).
struct AprioriReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double monotonicity_constant = 0.0;  // M
    double embedding_norm = 0.0;         // gamma
    double dopant_dual_norm = 0.0;
    bool pass = false;
};

AprioriReport check_apriori(const ScfResult& result, const Device& device, const ScfConfig& config);

struct UniquenessReport {
    double max_distance = 0.0;
    bool all_converged = true;
};

// Cross-start agreement of the xc-free solution; xc is always off here.
UniquenessReport check_uniqueness(const Device& device, const DistributionFunction& f,
                                  const ScfConfig& config, std::size_t starts, std::uint64_t seed);

// Weighted sup distances of f_beta to the zero-temperature ramp along the
// schedule.
std::vector<double> check_distribution_limit(const std::vector<double>& betas, double a);

}  // namespace ks1d
