#include "ks1d/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ks1d/errors.hpp"

namespace ks1d {

DistributionFunction::DistributionFunction(bool zero_t, double beta, double scale)
    : zero_t_(zero_t), beta_(beta), scale_(scale) {
    if (!(scale_ > 0.0)) throw DomainError("distribution function: scale must be positive");
    if (!zero_t_ && !(beta_ > 0.0 && std::isfinite(beta_)))
        throw DomainError("distribution function: beta must be positive and finite");
}

DistributionFunction DistributionFunction::zero_temperature(double scale) {
    return DistributionFunction(true, 0.0, scale);
}

DistributionFunction DistributionFunction::fermi(double beta, double scale) {
    return DistributionFunction(false, beta, scale);
}

double DistributionFunction::operator()(double s) const {
    if (zero_t_) return scale_ * (s < 0.0 ? -s : 0.0);
    if (s >= 0.0) return scale_ * std::log1p(std::exp(-beta_ * s)) / beta_;
    return scale_ * (-s + std::log1p(std::exp(beta_ * s)) / beta_);
}

namespace {

void require_ascending(const std::vector<double>& lambda) {
    if (lambda.empty()) throw DomainError("chemical potential: eigenvalue list is empty");
    for (std::size_t l = 0; l + 1 < lambda.size(); ++l)
        if (!(lambda[l] < lambda[l + 1]))
            throw DomainError("chemical potential: eigenvalues must be strictly ascending");
}

// mu for the ramp: exact solve of the piecewise-linear equation
// 2 c sum_l (mu - lambda_l)_+ = N.
double zero_t_mu(const std::vector<double>& lambda, double particles, double scale) {
    const double target = particles / (2.0 * scale);
    double partial = 0.0;
    for (std::size_t occupied = 1; occupied <= lambda.size(); ++occupied) {
        partial += lambda[occupied - 1];
        const double mu = (target + partial) / static_cast<double>(occupied);
        if (occupied == lambda.size() || mu <= lambda[occupied]) return mu;
    }
    return 0.0;  // unreachable: the last branch always returns
}

double occupation_sum(const DistributionFunction& f, const std::vector<double>& lambda, double mu) {
    double s = 0.0;
    for (double l : lambda) s += 2.0 * f(l - mu);
    return s;
}

// Certified upper bound for mu from 2 f(lambda_1 - mu) <= N.
double mu_upper_bound(const DistributionFunction& f, double lambda1, double particles) {
    const double half = particles / (2.0 * f.scale());
    if (f.zero_t()) return lambda1 + half;
    const double y = f.beta() * half;
    // invert (1/beta) ln(1+e^{beta s}) = half for s
    const double s = (y > 1e-6) ? half + std::log1p(-std::exp(-y)) / f.beta()
                                : std::log(std::expm1(y)) / f.beta();
    return lambda1 + s;
}

struct TruncationPlan {
    std::size_t level;
    double tail_bound;
    double mu_upper;
};

// Chunked Sturm-count bound: eigenvalues in [E_j, E_{j+1}) each contribute at
// most 2 f(E_j - mu_hat) particles. The discrete spectrum is finite, so the
// ladder terminates and the bound is rigorous.
TruncationPlan plan_truncation(const DistributionFunction& f, const DiscreteOperator& op,
                               double particles, double tail_tol) {
    if (!(tail_tol > 0.0)) throw DomainError("choose_truncation: tail_tol must be positive");
    if (!(particles >= 1.0)) throw DomainError("choose_truncation: particle number must be >= 1");
    const std::size_t dim = op.dim();
    const double lambda1 = lowest_eigenpairs(op, 1, Exec::Serial).eigenvalues[0];
    const double mu_hat = mu_upper_bound(f, lambda1, particles);

    if (f.zero_t()) {
        const std::size_t below = count_below(op, mu_hat);
        return {std::min(dim, std::max<std::size_t>(1, below)), 0.0, mu_hat};
    }

    std::vector<double> edges{mu_hat};
    std::vector<std::size_t> counts{count_below(op, mu_hat)};
    double step = 1.0 / f.beta();
    while (counts.back() < dim) {
        edges.push_back(edges.back() + step);
        counts.push_back(count_below(op, edges.back()));
        step *= 2.0;
    }
    const std::size_t chunks = edges.size() - 1;
    std::vector<double> weight(chunks), suffix(chunks + 1, 0.0);
    for (std::size_t j = 0; j < chunks; ++j) weight[j] = 2.0 * f(edges[j] - mu_hat);
    for (std::size_t j = chunks; j-- > 0;)
        suffix[j] = suffix[j + 1] + weight[j] * static_cast<double>(counts[j + 1] - counts[j]);

    const std::size_t floor_level = std::min(dim, std::max<std::size_t>(1, counts[0]));
    for (std::size_t j = 0; j < chunks; ++j) {
        if (suffix[j + 1] > tail_tol) continue;
        // All of chunks > j are within budget; trim inside chunk j.
        std::size_t level = counts[j + 1];
        if (weight[j] > 0.0) {
            const double room = std::floor((tail_tol - suffix[j + 1]) / weight[j]);
            const double keep = std::max(0.0, static_cast<double>(counts[j + 1]) - room);
            level = static_cast<std::size_t>(std::max(keep, static_cast<double>(counts[j])));
        } else {
            level = counts[j];
        }
        level = std::max(level, floor_level);
        // Recompute the certified bound at the chosen level.
        double bound = suffix[j + 1];
        if (level < counts[j + 1]) bound += weight[j] * static_cast<double>(counts[j + 1] - level);
        if (bound <= tail_tol) return {std::min(dim, level), bound, mu_hat};
    }
    return {dim, 0.0, mu_hat};
}

}  // namespace

OccupationSummary chemical_potential(const DistributionFunction& f,
                                     const std::vector<double>& eigenvalues, double particles,
                                     double tail_tol) {
    (void)tail_tol;
    require_ascending(eigenvalues);
    if (!(particles >= 1.0)) throw DomainError("chemical potential: particle number must be >= 1");

    OccupationSummary occ;
    occ.truncation_level = eigenvalues.size();
    if (f.zero_t()) {
        occ.mu = zero_t_mu(eigenvalues, particles, f.scale());
    } else {
        // Monotone bisection of g(E) = 2 sum f(lambda - E) - N.
        double lo = eigenvalues.front() - 1.0 - particles / (2.0 * f.scale());
        double hi = mu_upper_bound(f, eigenvalues.front(), particles) + 1.0;
        double width = std::max(1.0, hi - lo);
        while (occupation_sum(f, eigenvalues, lo) > particles) {
            lo -= width;
            width *= 2.0;
        }
        while (occupation_sum(f, eigenvalues, hi) < particles) {
            hi += width;
            width *= 2.0;
        }
        double mu = 0.5 * (lo + hi);
        for (int iter = 0; iter < 200; ++iter) {
            mu = 0.5 * (lo + hi);
            if (mu <= lo || mu >= hi) break;
            const double g = occupation_sum(f, eigenvalues, mu) - particles;
            if (std::fabs(g) <= 1e-13 * particles) break;
            if (g < 0.0)
                lo = mu;
            else
                hi = mu;
        }
        occ.mu = mu;
        const double gap = std::fabs(occupation_sum(f, eigenvalues, mu) - particles);
        if (!(gap <= 1e-12 * particles))
            throw NumericalError("chemical potential bisection stalled at |residual| = " +
                                 std::to_string(gap));
    }
    occ.occupations.resize(eigenvalues.size());
    for (std::size_t l = 0; l < eigenvalues.size(); ++l)
        occ.occupations[l] = 2.0 * f(eigenvalues[l] - occ.mu);
    occ.tail_bound = 0.0;
    return occ;
}

NodalField particle_density(const Spectrum& spectrum, const OccupationSummary& occupation,
                            Exec exec) {
    const std::size_t levels = spectrum.size();
    if (levels == 0 || occupation.occupations.size() != levels)
        throw DomainError("particle density: occupation/spectrum length mismatch");

    const GridPtr grid = spectrum.eigenfunctions.front().grid;
    NodalField u(grid);
    // Below ~2e5 accumulated products the loop is cheaper than a fork.
    if (levels * grid->node_count() < 200000) exec = Exec::Serial;
    parallel_for(static_cast<std::ptrdiff_t>(grid->node_count()), exec, [&](std::ptrdiff_t j) {
        double s = 0.0;
        for (std::size_t l = 0; l < levels; ++l) {
            const double psi = spectrum.eigenfunctions[l][static_cast<std::size_t>(j)];
            s += occupation.occupations[l] * psi * psi;
        }
        u[static_cast<std::size_t>(j)] = s;
    });
    return u;
}

std::size_t choose_truncation(const DistributionFunction& f, const DiscreteOperator& op,
                              double particles, double tail_tol) {
    return plan_truncation(f, op, particles, tail_tol).level;
}

DensityResult density_operator(const NodalField& potential, const DistributionFunction& f,
                               double particles, const ElementField& mass, double tail_tol,
                               Exec exec) {
    const DiscreteOperator op = assemble_schrodinger(potential.grid, mass, potential);
    const TruncationPlan plan = plan_truncation(f, op, particles, tail_tol);

    DensityResult result;
    result.spectrum = lowest_eigenpairs(op, plan.level, exec);
    result.occupation = chemical_potential(f, result.spectrum.eigenvalues, particles, tail_tol);
    if (result.occupation.mu > plan.mu_upper + 1e-9 * (1.0 + std::fabs(plan.mu_upper)))
        throw TruncationError("chemical potential exceeds its certified upper bound; the "
                              "truncated tail estimate is void");
    result.occupation.truncation_level = plan.level;
    result.occupation.tail_bound = plan.tail_bound;
    result.density = particle_density(result.spectrum, result.occupation, exec);
    return result;
}

namespace {

// sup of f(x) * x on [cutoff, infinity); zero for the ramp, exact monotone
// envelope (scale/beta) x e^{-beta x} for the fermi variant.
double tail_sup(const DistributionFunction& f, double cutoff) {
    if (f.zero_t()) return 0.0;
    return f.scale() / f.beta() * cutoff * std::exp(-f.beta() * cutoff);
}

}  // namespace

double weighted_sup_distance(const DistributionFunction& f1, const DistributionFunction& f2,
                             double a) {
    if (!(a <= -1.0)) throw DomainError("weighted_sup_distance: a must be <= -1");
    if (f1.zero_t() == f2.zero_t() && f1.scale() == f2.scale() &&
        (f1.zero_t() || f1.beta() == f2.beta()))
        return 0.0;

    double x_max = 2.0;
    if (!f1.zero_t()) x_max = std::max(x_max, 50.0 / f1.beta());
    if (!f2.zero_t()) x_max = std::max(x_max, 50.0 / f2.beta());

    const auto g = [&](double x) {
        return std::fabs(f1(x) - f2(x)) * std::max(1.0, x);
    };

    const int samples = 8192;
    double best_x = 0.0, best = g(0.0);  // the kink of the ramp sits at zero
    for (int i = 0; i <= samples; ++i) {
        const double x = a + (x_max - a) * static_cast<double>(i) / samples;
        const double v = g(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    const double h = (x_max - a) / samples;
    double lo = std::max(a, best_x - h), hi = std::min(x_max, best_x + h);
    for (int iter = 0; iter < 80; ++iter) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (g(m1) < g(m2))
            lo = m1;
        else
            hi = m2;
    }
    best = std::max(best, g(0.5 * (lo + hi)));

    return std::max(best, tail_sup(f1, x_max) + tail_sup(f2, x_max));
}

}  // namespace ks1d
