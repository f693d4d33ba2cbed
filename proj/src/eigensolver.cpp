#include "ks1d/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "ks1d/errors.hpp"
#include "ks1d/rng.hpp"

namespace ks1d {

namespace {

constexpr double kResidualTol = 1e-10;  // per pair: ||K psi - lambda W psi|| <= tol*(|lambda|+1)

// Diagonal similarity W^{-1/2} K W^{-1/2} reducing the generalized problem to
// standard symmetric tridiagonal form.
struct StandardForm {
    SymTridiag t;
    std::vector<double> inv_sqrt_w;
    double pivmin;
    double gersh_lo, gersh_hi;
};

StandardForm standard_form(const DiscreteOperator& op) {
    const std::size_t k = op.dim();
    StandardForm s;
    s.t.diag.resize(k);
    s.t.off.resize(k > 0 ? k - 1 : 0);
    s.inv_sqrt_w.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (!(op.weights[i] > 0.0)) throw DomainError("operator weights must be positive");
        s.inv_sqrt_w[i] = 1.0 / std::sqrt(op.weights[i]);
        s.t.diag[i] = op.stiffness.diag[i] / op.weights[i];
    }
    for (std::size_t i = 0; i + 1 < k; ++i)
        s.t.off[i] = op.stiffness.off[i] * s.inv_sqrt_w[i] * s.inv_sqrt_w[i + 1];

    double max_off = 0.0;
    for (double e : s.t.off) max_off = std::max(max_off, std::fabs(e));
    s.pivmin = std::numeric_limits<double>::min() * std::max(1.0, max_off * max_off);

    s.gersh_lo = std::numeric_limits<double>::infinity();
    s.gersh_hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
        double r = 0.0;
        if (i > 0) r += std::fabs(s.t.off[i - 1]);
        if (i + 1 < k) r += std::fabs(s.t.off[i]);
        s.gersh_lo = std::min(s.gersh_lo, s.t.diag[i] - r);
        s.gersh_hi = std::max(s.gersh_hi, s.t.diag[i] + r);
    }
    const double span = std::max({std::fabs(s.gersh_lo), std::fabs(s.gersh_hi), 1.0});
    s.gersh_lo -= 2.0 * std::numeric_limits<double>::epsilon() * span + 2.0 * s.pivmin;
    s.gersh_hi += 2.0 * std::numeric_limits<double>::epsilon() * span + 2.0 * s.pivmin;
    return s;
}

// Number of pivots <= 0 of T - sigma I (count of eigenvalues <= sigma).
std::size_t sturm_count(const SymTridiag& t, double sigma, double pivmin) {
    const std::size_t k = t.dim();
    std::size_t count = 0;
    double piv = t.diag[0] - sigma;
    if (std::fabs(piv) < pivmin) piv = -pivmin;
    if (piv <= 0.0) ++count;
    for (std::size_t i = 1; i < k; ++i) {
        piv = t.diag[i] - sigma - t.off[i - 1] * (t.off[i - 1] / piv);
        if (std::fabs(piv) < pivmin) piv = -pivmin;
        if (piv <= 0.0) ++count;
    }
    return count;
}

double bisect_kth(const StandardForm& s, std::size_t index_one_based) {
    double lo = s.gersh_lo, hi = s.gersh_hi;
    for (int iter = 0; iter < 140; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval collapsed to adjacent doubles
        if (sturm_count(s.t, mid, s.pivmin) >= index_one_based)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

void seed_start_vector(std::vector<double>& v, std::uint64_t seed) {
    SplitMix64 rng(seed);
    for (double& x : v) x = rng.uniform() - 0.5;
}

double norm2(const std::vector<double>& v) {
    long double s = 0.0L;
    for (double x : v) s += static_cast<long double>(x) * x;
    return static_cast<double>(std::sqrt(s));
}

void normalize2(std::vector<double>& v) {
    const double n = norm2(v);
    if (n > 0.0)
        for (double& x : v) x /= n;
}

// Rayleigh quotient of a unit vector, extended-precision accumulation.
double rayleigh_quotient(const SymTridiag& t, const std::vector<double>& v) {
    const std::size_t k = t.dim();
    long double num = 0.0L, den = 0.0L;
    for (std::size_t i = 0; i < k; ++i) {
        long double tv = static_cast<long double>(t.diag[i]) * v[i];
        if (i > 0) tv += static_cast<long double>(t.off[i - 1]) * v[i - 1];
        if (i + 1 < k) tv += static_cast<long double>(t.off[i]) * v[i + 1];
        num += tv * v[i];
        den += static_cast<long double>(v[i]) * v[i];
    }
    return static_cast<double>(num / den);
}

std::vector<double> inverse_iteration(const SymTridiag& t, double lambda, std::uint64_t seed,
                                      int iterations) {
    const std::size_t k = t.dim();
    std::vector<double> v(k);
    double shift = lambda;
    for (int attempt = 0; attempt < 4; ++attempt) {
        const ShiftedTridiagLU lu(t, shift);
        seed_start_vector(v, seed + 17ULL * static_cast<std::uint64_t>(attempt));
        normalize2(v);
        bool ok = true;
        for (int iter = 0; iter < iterations; ++iter) {
            std::vector<double> z = v;
            lu.solve_in_place(z);
            const double growth = norm2(z);
            if (!std::isfinite(growth) || growth == 0.0) {
                ok = false;
                break;
            }
            for (std::size_t i = 0; i < k; ++i) v[i] = z[i] / growth;
        }
        if (ok) return v;
        // Breakdown: perturb the shift and restart.
        const double scale = std::max(1.0, std::fabs(lambda));
        shift = lambda + scale * std::numeric_limits<double>::epsilon() *
                             static_cast<double>(attempt + 1) * 4.0;
    }
    throw NumericalError("inverse iteration failed to converge at eigenvalue " +
                         std::to_string(lambda));
}

// Interior vector of the standard form back to an L2-normalized nodal field;
// the overall sign puts the node of largest magnitude positive.
NodalField back_transform(const DiscreteOperator& op, const StandardForm& s,
                          const std::vector<double>& y) {
    const std::size_t k = op.dim();
    NodalField psi(op.grid);
    for (std::size_t i = 0; i < k; ++i) psi[i + 1] = y[i] * s.inv_sqrt_w[i];

    double nrm = 0.0;
    for (std::size_t i = 0; i < k; ++i) nrm += op.weights[i] * psi[i + 1] * psi[i + 1];
    const double inv = 1.0 / std::sqrt(nrm);
    std::size_t arg = 1;
    for (std::size_t i = 1; i <= k; ++i)
        if (std::fabs(psi[i]) > std::fabs(psi[arg])) arg = i;
    const double sign = psi[arg] < 0.0 ? -inv : inv;
    for (std::size_t i = 1; i <= k; ++i) psi[i] *= sign;
    return psi;
}

}  // namespace

Spectrum lowest_eigenpairs(const DiscreteOperator& op, std::size_t count, Exec exec) {
    const std::size_t k = op.dim();
    if (count < 1) throw InvalidRequestError("lowest_eigenpairs: need at least one pair");
    if (count > k)
        throw InvalidRequestError("lowest_eigenpairs: requested " + std::to_string(count) +
                                  " pairs from an operator of dimension " + std::to_string(k));

    const StandardForm s = standard_form(op);

    std::vector<double> raw(count);
    parallel_for(static_cast<std::ptrdiff_t>(count), exec,
                 [&](std::ptrdiff_t l) { raw[l] = bisect_kth(s, static_cast<std::size_t>(l) + 1); });

    // Group near-degenerate eigenvalues; vectors inside a cluster are
    // orthogonalized sequentially against each other.
    const double cluster_gap =
        1e-12 * std::max({std::fabs(s.gersh_lo), std::fabs(s.gersh_hi), 1.0});
    std::vector<std::size_t> cluster_start;
    for (std::size_t l = 0; l < count; ++l)
        if (l == 0 || raw[l] - raw[l - 1] > cluster_gap) cluster_start.push_back(l);

    std::vector<std::vector<double>> vecs(count);
    std::vector<double> refined(count);
    parallel_for(static_cast<std::ptrdiff_t>(cluster_start.size()), exec, [&](std::ptrdiff_t c) {
        const std::size_t begin = cluster_start[c];
        const std::size_t end =
            (static_cast<std::size_t>(c) + 1 < cluster_start.size()) ? cluster_start[c + 1] : count;
        const auto orthogonalize = [&](std::size_t l) {
            for (std::size_t p = begin; p < l; ++p) {
                long double dot = 0.0L;
                for (std::size_t i = 0; i < k; ++i)
                    dot += static_cast<long double>(vecs[l][i]) * vecs[p][i];
                for (std::size_t i = 0; i < k; ++i)
                    vecs[l][i] -= static_cast<double>(dot) * vecs[p][i];
            }
            normalize2(vecs[l]);
        };
        for (std::size_t l = begin; l < end; ++l) {
            vecs[l] = inverse_iteration(s.t, raw[l], 0x5eed0000ULL + l, 3);
            orthogonalize(l);
            refined[l] = rayleigh_quotient(s.t, vecs[l]);
        }
    });

    Spectrum spec;
    spec.eigenvalues.resize(count);
    spec.eigenfunctions.resize(count);
    for (std::size_t l = 0; l < count; ++l) {
        NodalField psi = back_transform(op, s, vecs[l]);
        double res = eigenpair_residual(op, psi, refined[l]);
        if (!(res <= kResidualTol * (std::fabs(refined[l]) + 1.0))) {
            // One slower retry before giving up.
            vecs[l] = inverse_iteration(s.t, raw[l], 0xa1c0000ULL + l, 8);
            normalize2(vecs[l]);
            refined[l] = rayleigh_quotient(s.t, vecs[l]);
            psi = back_transform(op, s, vecs[l]);
            res = eigenpair_residual(op, psi, refined[l]);
            if (!(res <= kResidualTol * (std::fabs(refined[l]) + 1.0)))
                throw NumericalError("eigenpair residual " + std::to_string(res) +
                                     " misses the contract at eigenvalue " +
                                     std::to_string(refined[l]));
        }
        spec.eigenvalues[l] = refined[l];
        spec.eigenfunctions[l] = std::move(psi);
    }
    return spec;
}

std::size_t count_below(const DiscreteOperator& op, double threshold) {
    const StandardForm s = standard_form(op);
    return sturm_count(s.t, threshold, s.pivmin);
}

double eigenpair_residual(const DiscreteOperator& op, const NodalField& psi, double lambda) {
    const std::size_t k = op.dim();
    if (psi.size() != op.grid->node_count())
        throw InvalidRequestError("eigenpair_residual: field does not match the operator grid");
    long double sum = 0.0L;
    for (std::size_t i = 0; i < k; ++i) {
        long double r = static_cast<long double>(op.stiffness.diag[i]) * psi[i + 1];
        if (i > 0) r += static_cast<long double>(op.stiffness.off[i - 1]) * psi[i];
        if (i + 1 < k) r += static_cast<long double>(op.stiffness.off[i]) * psi[i + 2];
        r -= static_cast<long double>(lambda) * op.weights[i] * psi[i + 1];
        sum += r * r;
    }
    return static_cast<double>(std::sqrt(sum));
}

}  // namespace ks1d
