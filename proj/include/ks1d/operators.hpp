#pragma once

#include "ks1d/grid.hpp"
#include "ks1d/tridiag.hpp"

namespace ks1d {

// Discrete self-adjoint operator under homogeneous Dirichlet conditions.
// Generalized eigenproblem  stiffness * v = lambda * diag(weights) * v  over
// the interior nodes; the diagonal weights make it reducible to a standard
// symmetric tridiagonal problem by diagonal similarity.
struct DiscreteOperator {
    GridPtr grid;
    SymTridiag stiffness;
    std::vector<double> weights;  // lumped mass, one per interior node

    std::size_t dim() const { return stiffness.dim(); }
};

// Ben-Daniel-Duke kinetic term (scaled units, hbar^2/2 = 1) plus the potential
// integrated with trapezoid (lumped) weights. Linear elements.
DiscreteOperator assemble_schrodinger(const GridPtr& grid, const ElementField& mass,
                                      const NodalField& potential);

// Stiffness of -d/dx (eps d/dx); symmetric positive definite.
DiscreteOperator assemble_poisson(const GridPtr& grid, const ElementField& eps);

// eps-harmonic lift of the contact values: matches phi0 and phi1 at the ends
// and keeps eps * phi' constant across elements.
NodalField lift_boundary(const GridPtr& grid, const ElementField& eps, double phi0, double phi1);

// phi = lift + P^{-1}(D - q u), direct tridiagonal solve.
NodalField solve_poisson(const GridPtr& grid, const ElementField& eps, const ElementField& dopants,
                         const NodalField& density, double charge, double phi0, double phi1);

// Normwise relative residual of the interior Poisson system at `phi`
// (backward-error form, for diagnostics and tests).
double poisson_residual(const GridPtr& grid, const ElementField& eps, const ElementField& dopants,
                        const NodalField& density, double charge, const NodalField& phi);

}  // namespace ks1d
