#pragma once

#include <vector>

#include "ks1d/eigensolver.hpp"

namespace ks1d {

// Occupation profile of class D: either the zero-temperature ramp
// scale * max(-s, 0) or the finite-temperature function
// scale * (1/beta) * ln(1 + exp(-beta s)).
class DistributionFunction {
  public:
    static DistributionFunction zero_temperature(double scale = 1.0);
    static DistributionFunction fermi(double beta, double scale = 1.0);

    bool zero_t() const { return zero_t_; }
    double beta() const { return beta_; }  // meaningful for the fermi variant only
    double scale() const { return scale_; }

    // Overflow-safe evaluation, finite for all finite arguments.
    double operator()(double s) const;

  private:
    DistributionFunction(bool zero_t, double beta, double scale);

    bool zero_t_;
    double beta_;
    double scale_;
};

struct OccupationSummary {
    double mu = 0.0;
    std::vector<double> occupations;  // o_l = 2 f(lambda_l - mu), spin factor included
    std::size_t truncation_level = 0;
    double tail_bound = 0.0;  // certified particles beyond the retained levels
};

// Solves 2 sum_l f(lambda_l - mu) = N for mu. Exact piecewise-linear solve at
// zero temperature, monotone bisection otherwise.
OccupationSummary chemical_potential(const DistributionFunction& f,
                                     const std::vector<double>& eigenvalues, double particles,
                                     double tail_tol);

// u(x) = sum_l o_l |psi_l(x)|^2.
NodalField particle_density(const Spectrum& spectrum, const OccupationSummary& occupation,
                            Exec exec = Exec::Parallel);

// Number of levels to retain so that the occupation beyond them is certified
// below tail_tol. Exact (zero tail) at zero temperature; Sturm-count chunking
// of the spectrum above a rigorous chemical-potential upper bound otherwise.
std::size_t choose_truncation(const DistributionFunction& f, const DiscreteOperator& op,
                              double particles, double tail_tol);

struct DensityResult {
    NodalField density;
    OccupationSummary occupation;
    Spectrum spectrum;
};

// The particle density operator N_f(V).
DensityResult density_operator(const NodalField& potential, const DistributionFunction& f,
                               double particles, const ElementField& mass, double tail_tol,
                               Exec exec = Exec::Parallel);

// sup over [a, infinity) of |f1(x) - f2(x)| * theta(x) with theta(x) = max(1, x);
// sampled up to a cutoff, analytic tail bound beyond it.
double weighted_sup_distance(const DistributionFunction& f1, const DistributionFunction& f2,
                             double a);

}  // namespace ks1d
