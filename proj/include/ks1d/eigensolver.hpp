#pragma once

#include <vector>

#include "ks1d/operators.hpp"
#include "ks1d/parallel.hpp"

namespace ks1d {

// Lowest part of the spectrum of a DiscreteOperator. Eigenvalues ascend and
// are simple; eigenfunctions are L2-normalized in the trapezoid quadrature and
// mutually orthogonal in the lumped inner product.
struct Spectrum {
    std::vector<double> eigenvalues;
    std::vector<NodalField> eigenfunctions;

    std::size_t size() const { return eigenvalues.size(); }
};

// Sturm-sequence bisection for the eigenvalues, inverse iteration for the
// eigenvectors; pairs are computed independently and in parallel.
Spectrum lowest_eigenpairs(const DiscreteOperator& op, std::size_t count, Exec exec = Exec::Parallel);

// Number of eigenvalues strictly below the threshold.
std::size_t count_below(const DiscreteOperator& op, double threshold);

// Euclidean norm of  stiffness*psi - lambda*diag(weights)*psi  over the
// interior nodes.
double eigenpair_residual(const DiscreteOperator& op, const NodalField& psi, double lambda);

}  // namespace ks1d
