#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ks1d/device.hpp"
#include "ks1d/operators.hpp"
#include "ks1d/rng.hpp"

namespace ks1d::test {

inline LayerStack single_layer(double mass = 1.0, double eps = 1.0, double band = 0.0,
                               double doping = 0.0) {
    LayerStack s;
    s.layers = {Layer{1.0, mass, eps, band, doping}};
    return s;
}

inline Device bare_well(std::size_t n) { return make_device(single_layer(), n); }

inline NodalField nodal_from(const GridPtr& grid, const std::function<double(double)>& fn) {
    NodalField f(grid);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = fn(grid->node(i));
    return f;
}

inline double l1_diff(const NodalField& a, const NodalField& b) {
    NodalField d(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return norm_l1(d);
}

inline LayerStack random_stack(SplitMix64& rng) {
    const std::size_t count = 1 + rng.below(4);
    LayerStack s;
    std::vector<double> cuts{0.0, 1.0};
    for (std::size_t i = 1; i < count; ++i) cuts.push_back(rng.uniform(0.05, 0.95));
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i < count; ++i) {
        Layer layer;
        layer.thickness = cuts[i + 1] - cuts[i];
        if (layer.thickness < 1e-3) layer.thickness = 1e-3;
        layer.mass = rng.uniform(0.3, 3.0);
        layer.eps = rng.uniform(0.5, 5.0);
        layer.band_offset = rng.uniform(-2.0, 2.0);
        layer.doping = rng.uniform(-3.0, 3.0);
        s.layers.push_back(layer);
    }
    double total = 0.0;
    for (const Layer& l : s.layers) total += l.thickness;
    for (Layer& l : s.layers) l.thickness /= total;
    return s;
}

// Piecewise-constant random potential scaled to a target L1 norm.
inline NodalField random_potential(const GridPtr& grid, SplitMix64& rng, double l1_target) {
    const int segments = 4 + static_cast<int>(rng.below(5));
    std::vector<double> level(segments);
    for (double& v : level) v = rng.uniform(-1.0, 1.0);
    NodalField v(grid);
    for (std::size_t i = 0; i < v.size(); ++i) {
        int s = static_cast<int>(grid->node(i) * segments);
        s = std::min(s, segments - 1);
        v[i] = level[s];
    }
    const double norm = norm_l1(v);
    if (norm > 0.0)
        for (std::size_t i = 0; i < v.size(); ++i) v[i] *= l1_target / norm;
    return v;
}

// Dense oracle: all eigenvalues of the generalized problem, through the same
// diagonal similarity but a full symmetric eigensolve.
inline std::vector<double> dense_eigenvalues(const DiscreteOperator& op) {
    const auto n = static_cast<Eigen::Index>(op.dim());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        t(i, i) = op.stiffness.diag[iu] / op.weights[iu];
        if (i + 1 < n) {
            const double e = op.stiffness.off[iu] /
                             std::sqrt(op.weights[iu] * op.weights[iu + 1]);
            t(i, i + 1) = t(i + 1, i) = e;
        }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);
    return {solver.eigenvalues().data(), solver.eigenvalues().data() + n};
}

}  // namespace ks1d::test
