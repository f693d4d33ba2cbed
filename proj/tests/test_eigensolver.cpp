#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "ks1d/eigensolver.hpp"
#include "ks1d/errors.hpp"

using namespace ks1d;
using namespace ks1d::test;
using std::numbers::pi;

namespace {

DiscreteOperator bare_operator(std::size_t n) {
    const Device d = bare_well(n);
    return assemble_schrodinger(d.grid, d.profile.mass, NodalField(d.grid, 0.0));
}

}  // namespace

TEST_SUITE_BEGIN("eigensolver");

TEST_CASE("matches the closed-form discrete spectrum") {
    // n = 256 keeps every node dyadic, so the assembled matrix is exactly the
    // Toeplitz operator of the closed form.
    const std::size_t n = 256;
    const double h = 1.0 / static_cast<double>(n);
    const Spectrum spec = lowest_eigenpairs(bare_operator(n), 12);
    for (std::size_t l = 1; l <= 12; ++l) {
        const double s = std::sin(0.5 * static_cast<double>(l) * pi * h);
        const double exact = 4.0 / (h * h) * s * s;
        CHECK(std::fabs(spec.eigenvalues[l - 1] - exact) <= 1e-12 * (1.0 + exact));
    }
}

TEST_CASE("approximates the continuum spectrum at order h^2") {
    const std::size_t n = 2000;
    const Spectrum spec = lowest_eigenpairs(bare_operator(n), 10);
    for (std::size_t l = 1; l <= 10; ++l) {
        const double exact = static_cast<double>(l * l) * pi * pi;
        const double rel = std::fabs(spec.eigenvalues[l - 1] - exact) / exact;
        // The lumped discretization deviates by (l pi h / 2)^2 / 3.
        const double theta = 0.5 * static_cast<double>(l) * pi / static_cast<double>(n);
        CHECK(rel <= 1.05 * theta * theta / 3.0 + 1e-9);
        if (l <= 6) CHECK(rel <= 1e-5);
    }
}

TEST_CASE("constant potential shifts the whole spectrum") {
    // n = 32 keeps every matrix entry an exact dyadic value.
    const Device d = bare_well(32);
    const DiscreteOperator h0 =
        assemble_schrodinger(d.grid, d.profile.mass, NodalField(d.grid, 0.0));
    const DiscreteOperator h5 =
        assemble_schrodinger(d.grid, d.profile.mass, NodalField(d.grid, 5.0));
    const Spectrum s0 = lowest_eigenpairs(h0, 31);
    const Spectrum s5 = lowest_eigenpairs(h5, 31);
    for (std::size_t l = 0; l < 31; ++l)
        CHECK(std::fabs(s5.eigenvalues[l] - s0.eigenvalues[l] - 5.0) <= 1e-12);
}

TEST_CASE("Sturm oscillation: interior sign changes count the level") {
    const Spectrum spec = lowest_eigenpairs(bare_operator(150), 3);
    const auto sign_changes = [](const NodalField& psi) {
        int changes = 0;
        double prev = 0.0;
        for (std::size_t i = 1; i + 1 < psi.size(); ++i) {
            if (prev != 0.0 && psi[i] * prev < 0.0) ++changes;
            prev = psi[i];
        }
        return changes;
    };
    CHECK(sign_changes(spec.eigenfunctions[0]) == 0);
    CHECK(sign_changes(spec.eigenfunctions[1]) == 1);
    CHECK(sign_changes(spec.eigenfunctions[2]) == 2);
}

TEST_CASE("count_below agrees with the analytic spectrum") {
    const DiscreteOperator op = bare_operator(500);
    const Spectrum spec = lowest_eigenpairs(op, 1);
    CHECK(count_below(op, spec.eigenvalues[0] - 1.0) == 0);
    CHECK(count_below(op, 2.5 * pi * pi) == 1);
    CHECK(count_below(op, 1e12) == op.dim());
}

TEST_CASE("agrees with a dense oracle on random small operators") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        SplitMix64 rng(950 + seed);
        const LayerStack stack = random_stack(rng);
        const std::size_t n = 12 + rng.below(39);  // dimension <= 50
        const GridPtr g = build_grid(n, stack);
        const MaterialProfile p = sample_layers(stack, g);
        const NodalField v = random_potential(g, rng, rng.uniform(0.0, 4.0));
        const DiscreteOperator op = assemble_schrodinger(g, p.mass, v);
        const Spectrum spec = lowest_eigenpairs(op, op.dim());
        const std::vector<double> oracle = dense_eigenvalues(op);
        for (std::size_t l = 0; l < op.dim(); ++l)
            CHECK(std::fabs(spec.eigenvalues[l] - oracle[l]) <=
                  1e-10 * (1.0 + std::fabs(oracle[l])));
    }
}

TEST_CASE("spectrum contract on random layered profiles") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        SplitMix64 rng(31337 + seed);
        const LayerStack stack = random_stack(rng);
        const GridPtr g = build_grid(250 + rng.below(150), stack);
        const MaterialProfile p = sample_layers(stack, g);
        const NodalField v = random_potential(g, rng, rng.uniform(0.0, 5.0));
        const DiscreteOperator op = assemble_schrodinger(g, p.mass, v);
        const std::size_t levels = 12;
        const Spectrum spec = lowest_eigenpairs(op, levels);

        for (std::size_t l = 0; l < levels; ++l) {
            NodalField sq(g);
            for (std::size_t i = 0; i < sq.size(); ++i)
                sq[i] = spec.eigenfunctions[l][i] * spec.eigenfunctions[l][i];
            CHECK(std::fabs(integrate(sq) - 1.0) <= 1e-10);
            CHECK(eigenpair_residual(op, spec.eigenfunctions[l], spec.eigenvalues[l]) <=
                  1e-10 * (std::fabs(spec.eigenvalues[l]) + 1.0));
            if (l + 1 < levels) CHECK(spec.eigenvalues[l] < spec.eigenvalues[l + 1]);
        }
        for (std::size_t a = 0; a < levels; ++a)
            for (std::size_t b = a + 1; b < levels; ++b) {
                double dot = 0.0;
                for (std::size_t i = 0; i < op.dim(); ++i)
                    dot += op.weights[i] * spec.eigenfunctions[a][i + 1] *
                           spec.eigenfunctions[b][i + 1];
                CHECK(std::fabs(dot) <= 1e-8);
            }
    }
}

TEST_CASE("invalid pair counts are rejected") {
    const DiscreteOperator op = bare_operator(10);
    CHECK_THROWS_AS((void)lowest_eigenpairs(op, 0), InvalidRequestError);
    CHECK_THROWS_AS((void)lowest_eigenpairs(op, op.dim() + 1), InvalidRequestError);
}

TEST_SUITE_END();
