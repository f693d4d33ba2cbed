#include "ks1d/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ks1d/errors.hpp"
#include "ks1d/operators.hpp"
#include "ks1d/rng.hpp"

namespace ks1d {

namespace {

constexpr double kInconclusiveMargin = 1e-8;

std::vector<double> lowest_eigenvalues(const DiscreteOperator& op, std::size_t count) {
    return lowest_eigenpairs(op, count, Exec::Parallel).eigenvalues;
}

}  // namespace

BoundReport check_eigenvalue_bounds(const Device& device, const NodalField& potential,
                                    std::size_t levels) {
    if (levels < 1) throw InvalidRequestError("eigenvalue bounds: need at least one level");

    const DiscreteOperator h_v =
        assemble_schrodinger(device.grid, device.profile.mass, potential);
    const DiscreteOperator h_0 =
        assemble_schrodinger(device.grid, device.profile.mass, NodalField(device.grid, 0.0));

    BoundReport report;
    report.observed = lowest_eigenvalues(h_v, levels);
    const std::vector<double> sigma = lowest_eigenvalues(h_0, levels);

    double mass_sup = 0.0;
    for (double m : device.profile.mass.values) mass_sup = std::max(mass_sup, m);
    report.m_bar = std::max(1.0, mass_sup);  // scaled units: 2 ||m|| / hbar^2 = ||m||
    const double v_l1 = norm_l1(potential);
    report.rho_v = -2.0 * v_l1 * v_l1 * report.m_bar - 1.0;

    report.lower.resize(levels);
    report.upper.resize(levels);
    report.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < levels; ++l) {
        report.lower[l] = 0.5 * (sigma[l] + 1.0) + report.rho_v;
        report.upper[l] = 1.5 * (sigma[l] + 1.0) - report.rho_v - 2.0;
        const double margin =
            std::min(report.observed[l] - report.lower[l], report.upper[l] - report.observed[l]);
        report.worst_margin = std::min(report.worst_margin, margin);
    }
    if (report.worst_margin >= 0.0)
        report.status = CheckStatus::Pass;
    else if (report.worst_margin >= -kInconclusiveMargin)
        report.status = CheckStatus::Inconclusive;
    else
        report.status = CheckStatus::Fail;
    return report;
}

TraceCheck check_trace_identity(const Eigen::MatrixXd& h, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& v, const DistributionFunction& f) {
    const Eigen::Index n = h.rows();
    if (h.cols() != n || u.size() != n || v.size() != n)
        throw InvalidRequestError("trace identity: dimension mismatch");

    const Eigen::MatrixXd a = h + Eigen::MatrixXd(u.asDiagonal());
    const Eigen::MatrixXd b = h + Eigen::MatrixXd(v.asDiagonal());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(a), eb(b);
    if (ea.info() != Eigen::Success || eb.info() != Eigen::Success)
        throw NumericalError("trace identity: dense eigensolver failed");

    const Eigen::VectorXd delta = u - v;

    // lhs through the matrix functions in their eigenbases
    double lhs = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto psi = ea.eigenvectors().col(k);
        lhs += f(ea.eigenvalues()[k]) * psi.cwiseAbs2().dot(delta);
    }
    for (Eigen::Index l = 0; l < n; ++l) {
        const auto xi = eb.eigenvectors().col(l);
        lhs -= f(eb.eigenvalues()[l]) * xi.cwiseAbs2().dot(delta);
    }

    // rhs through the eigenpair overlaps
    const Eigen::MatrixXd overlap = ea.eigenvectors().transpose() * eb.eigenvectors();
    double rhs = 0.0;
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) {
            const double dl = ea.eigenvalues()[k] - eb.eigenvalues()[l];
            const double df = f(ea.eigenvalues()[k]) - f(eb.eigenvalues()[l]);
            rhs += df * dl * overlap(k, l) * overlap(k, l);
        }

    return {lhs, rhs, std::fabs(lhs - rhs)};
}

double check_monotonicity(const Device& device, const NodalField& u_pot, const NodalField& v_pot,
                          const DistributionFunction& f, double particles, double tail_tol) {
    const NodalField nu =
        density_operator(u_pot, f, particles, device.profile.mass, tail_tol).density;
    const NodalField nv =
        density_operator(v_pot, f, particles, device.profile.mass, tail_tol).density;
    NodalField product(device.grid);
    for (std::size_t i = 0; i < product.size(); ++i)
        product[i] = (nu[i] - nv[i]) * (u_pot[i] - v_pot[i]);
    return integrate(product);
}

AprioriReport check_apriori(const ScfResult& result, const Device& device,
                            const ScfConfig& config) {
    AprioriReport report;
    const NodalField lift =
        lift_boundary(device.grid, device.profile.eps, device.phi0, device.phi1);
    NodalField diff(device.grid);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = result.phi[i] - lift[i];
    report.lhs = norm_w12(diff);

    double eps_inf = std::numeric_limits<double>::infinity();
    for (double e : device.profile.eps.values) eps_inf = std::min(eps_inf, e);
    report.monotonicity_constant = 0.5 * eps_inf;
    report.embedding_norm = std::sqrt(2.0);
    report.dopant_dual_norm = dual_norm_wm12(device.profile.doping);
    report.rhs = (report.dopant_dual_norm +
                  report.embedding_norm * config.particles * config.charge) /
                 report.monotonicity_constant;
    report.pass = report.lhs <= report.rhs;
    return report;
}

UniquenessReport check_uniqueness(const Device& device, const DistributionFunction& f,
                                  const ScfConfig& config, std::size_t starts,
                                  std::uint64_t seed) {
    if (starts < 1) throw InvalidRequestError("uniqueness: need at least one start");

    std::vector<NodalField> solutions;
    UniquenessReport report;
    for (std::size_t s = 0; s < starts; ++s) {
        SplitMix64 rng(seed + 1000003ULL * s);
        NodalField u0(device.grid);
        for (std::size_t i = 0; i < u0.size(); ++i) u0[i] = rng.uniform(0.05, 1.0);
        const ScfResult run = solve_scf(device, f, XcModel::none(), config, u0);
        if (!run.converged) report.all_converged = false;
        solutions.push_back(run.density);
    }
    for (std::size_t i = 0; i < solutions.size(); ++i)
        for (std::size_t j = i + 1; j < solutions.size(); ++j) {
            NodalField diff(device.grid);
            for (std::size_t p = 0; p < diff.size(); ++p)
                diff[p] = solutions[i][p] - solutions[j][p];
            report.max_distance = std::max(report.max_distance, norm_l1(diff));
        }
    return report;
}

std::vector<double> check_distribution_limit(const std::vector<double>& betas, double a) {
    if (!(a <= -1.0)) throw DomainError("distribution limit: a must be <= -1");
    for (std::size_t j = 0; j + 1 < betas.size(); ++j)
        if (!(betas[j] < betas[j + 1]))
            throw InvalidRequestError("distribution limit: schedule must be strictly increasing");

    const DistributionFunction ramp = DistributionFunction::zero_temperature();
    std::vector<double> distances(betas.size());
    for (std::size_t j = 0; j < betas.size(); ++j)
        distances[j] = weighted_sup_distance(DistributionFunction::fermi(betas[j]), ramp, a);
    return distances;
}

}  // namespace ks1d
