#include "ks1d/operators.hpp"

#include <cmath>
#include <string>

#include "ks1d/errors.hpp"

namespace ks1d {

namespace {

void require_positive(const ElementField& f, const char* what) {
    for (std::size_t e = 0; e < f.size(); ++e)
        if (!(f[e] > 0.0))
            throw DomainError(std::string(what) + " must be positive on every element (element " +
                              std::to_string(e) + ")");
}

std::vector<double> lumped_weights(const Grid& grid) {
    const auto& h = grid.widths();
    const std::size_t k = grid.node_count() - 2;
    std::vector<double> w(k);
    for (std::size_t i = 1; i <= k; ++i) w[i - 1] = 0.5 * (h[i - 1] + h[i]);
    return w;
}

// rhs of the homogeneous Poisson system: dopant load minus q * lumped density.
std::vector<double> poisson_rhs(const Grid& grid, const ElementField& dopants,
                                const NodalField& density, double charge) {
    const auto& h = grid.widths();
    const std::size_t k = grid.node_count() - 2;
    std::vector<double> rhs(k);
    for (std::size_t i = 1; i <= k; ++i) {
        const double w = 0.5 * (h[i - 1] + h[i]);
        rhs[i - 1] = 0.5 * (dopants[i - 1] * h[i - 1] + dopants[i] * h[i]) - charge * density[i] * w;
    }
    return rhs;
}

}  // namespace

DiscreteOperator assemble_schrodinger(const GridPtr& grid, const ElementField& mass,
                                      const NodalField& potential) {
    require_positive(mass, "effective mass");
    for (double v : potential.values)
        if (!std::isfinite(v)) throw DomainError("potential must be finite at every node");

    const auto& h = grid->widths();
    const std::size_t k = grid->node_count() - 2;
    DiscreteOperator op;
    op.grid = grid;
    op.weights = lumped_weights(*grid);
    op.stiffness.diag.resize(k);
    op.stiffness.off.resize(k > 0 ? k - 1 : 0);
    for (std::size_t i = 1; i <= k; ++i) {
        op.stiffness.diag[i - 1] = 1.0 / (mass[i - 1] * h[i - 1]) + 1.0 / (mass[i] * h[i]) +
                                   potential[i] * op.weights[i - 1];
        if (i < k) op.stiffness.off[i - 1] = -1.0 / (mass[i] * h[i]);
    }
    return op;
}

DiscreteOperator assemble_poisson(const GridPtr& grid, const ElementField& eps) {
    require_positive(eps, "permittivity");

    const auto& h = grid->widths();
    const std::size_t k = grid->node_count() - 2;
    DiscreteOperator op;
    op.grid = grid;
    op.weights = lumped_weights(*grid);
    op.stiffness.diag.resize(k);
    op.stiffness.off.resize(k > 0 ? k - 1 : 0);
    for (std::size_t i = 1; i <= k; ++i) {
        op.stiffness.diag[i - 1] = eps[i - 1] / h[i - 1] + eps[i] / h[i];
        if (i < k) op.stiffness.off[i - 1] = -eps[i] / h[i];
    }
    return op;
}

NodalField lift_boundary(const GridPtr& grid, const ElementField& eps, double phi0, double phi1) {
    require_positive(eps, "permittivity");
    const auto& h = grid->widths();
    NodalField lift(grid);
    double total = 0.0;
    for (std::size_t e = 0; e < h.size(); ++e) total += h[e] / eps[e];
    lift[0] = phi0;
    double partial = 0.0;
    for (std::size_t e = 0; e < h.size(); ++e) {
        partial += h[e] / eps[e];
        lift[e + 1] = phi0 + (phi1 - phi0) * (partial / total);
    }
    return lift;
}

NodalField solve_poisson(const GridPtr& grid, const ElementField& eps, const ElementField& dopants,
                         const NodalField& density, double charge, double phi0, double phi1) {
    const DiscreteOperator p = assemble_poisson(grid, eps);
    const std::vector<double> rhs = poisson_rhs(*grid, dopants, density, charge);
    const std::vector<double> interior = solve_spd(p.stiffness, rhs);

    NodalField phi = lift_boundary(grid, eps, phi0, phi1);
    for (std::size_t i = 0; i < interior.size(); ++i) phi[i + 1] += interior[i];
    return phi;
}

double poisson_residual(const GridPtr& grid, const ElementField& eps, const ElementField& dopants,
                        const NodalField& density, double charge, const NodalField& phi) {
    const DiscreteOperator p = assemble_poisson(grid, eps);
    const std::vector<double> rhs = poisson_rhs(*grid, dopants, density, charge);
    const NodalField lift = lift_boundary(grid, eps, phi.values.front(), phi.values.back());

    const std::size_t k = p.dim();
    std::vector<double> interior(k);
    for (std::size_t i = 0; i < k; ++i) interior[i] = phi[i + 1] - lift[i + 1];
    const std::vector<double> ax = matvec(p.stiffness, interior);

    double res = 0.0, rhs_inf = 0.0, x_inf = 0.0, a_inf = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        res = std::max(res, std::fabs(ax[i] - rhs[i]));
        rhs_inf = std::max(rhs_inf, std::fabs(rhs[i]));
        x_inf = std::max(x_inf, std::fabs(interior[i]));
        double row = std::fabs(p.stiffness.diag[i]);
        if (i > 0) row += std::fabs(p.stiffness.off[i - 1]);
        if (i + 1 < k) row += std::fabs(p.stiffness.off[i]);
        a_inf = std::max(a_inf, row);
    }
    const double denom = a_inf * x_inf + rhs_inf;
    return denom > 0.0 ? res / denom : res;
}

}  // namespace ks1d
