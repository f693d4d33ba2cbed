#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ks1d/errors.hpp"
#include "ks1d/xc.hpp"

using namespace ks1d;
using namespace ks1d::test;

TEST_SUITE_BEGIN("xc");

TEST_CASE("disabled model returns the zero field") {
    const GridPtr g = build_grid(8, single_layer());
    const NodalField v = evaluate_vxc(XcModel::none(), NodalField(g, 5.0));
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == 0.0);
}

TEST_CASE("xalpha evaluates the local power law") {
    const GridPtr g = build_grid(8, single_layer());
    const NodalField cube =
        evaluate_vxc(XcModel::xalpha(1.0, 1.0 / 3.0), NodalField(g, 8.0));
    for (std::size_t i = 0; i < cube.size(); ++i)
        CHECK(cube[i] == doctest::Approx(-2.0).epsilon(1e-14));

    const NodalField linear = evaluate_vxc(XcModel::xalpha(2.0, 1.0), NodalField(g, 3.0));
    for (std::size_t i = 0; i < linear.size(); ++i)
        CHECK(linear[i] == doctest::Approx(-6.0).epsilon(1e-14));
}

TEST_CASE("invalid parameters and negative densities are rejected") {
    CHECK_THROWS_AS((void)XcModel::xalpha(-1.0, 0.5), DomainError);
    CHECK_THROWS_AS((void)XcModel::xalpha(1.0, 0.0), DomainError);
    CHECK_THROWS_AS((void)XcModel::xalpha(1.0, 1.5), DomainError);

    const GridPtr g = build_grid(8, single_layer());
    NodalField tiny_negative(g, 1.0);
    tiny_negative[3] = -1e-13;  // clipped
    const NodalField ok = evaluate_vxc(XcModel::xalpha(1.0, 0.5), tiny_negative);
    CHECK(ok[3] == 0.0);

    NodalField bad(g, 1.0);
    bad[3] = -1e-6;
    CHECK_THROWS_AS((void)evaluate_vxc(XcModel::xalpha(1.0, 0.5), bad), DomainError);
}

TEST_CASE("pointwise monotone: larger density, deeper potential") {
    const GridPtr g = build_grid(20, single_layer());
    SplitMix64 rng(77);
    NodalField u1(g), u2(g);
    for (std::size_t i = 0; i < u1.size(); ++i) {
        u1[i] = rng.uniform(0.0, 2.0);
        u2[i] = u1[i] + rng.uniform(0.0, 2.0);
    }
    const XcModel model = XcModel::xalpha(1.3, 1.0 / 3.0);
    const NodalField v1 = evaluate_vxc(model, u1);
    const NodalField v2 = evaluate_vxc(model, u2);
    for (std::size_t i = 0; i < v1.size(); ++i) {
        CHECK(v1[i] >= v2[i]);
        CHECK(v2[i] <= 0.0);
    }
}

TEST_CASE("L1-continuity under shrinking perturbations") {
    const GridPtr g = build_grid(50, single_layer());
    SplitMix64 rng(78);
    NodalField u(g), bump(g);
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = rng.uniform(0.5, 2.0);
        bump[i] = rng.uniform(0.0, 1.0);
    }
    const XcModel model = XcModel::xalpha(1.0, 2.0 / 3.0);
    const NodalField base = evaluate_vxc(model, u);
    double prev = 1e300;
    for (double scale : {1e-1, 1e-2, 1e-3, 1e-4}) {
        NodalField shifted = u;
        for (std::size_t i = 0; i < u.size(); ++i) shifted[i] += scale * bump[i];
        const double dist = l1_diff(evaluate_vxc(model, shifted), base);
        CHECK(dist < prev);
        prev = dist;
    }
    CHECK(prev <= 1e-4);
}

TEST_SUITE_END();
