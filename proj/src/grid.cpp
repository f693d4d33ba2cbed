#include "ks1d/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ks1d/errors.hpp"
#include "ks1d/tridiag.hpp"

namespace ks1d {

Grid::Grid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 3) throw DomainError("grid: need at least 2 elements");
    if (nodes_.front() != 0.0 || nodes_.back() != 1.0)
        throw DomainError("grid: nodes must span [0,1] exactly");
    widths_.resize(nodes_.size() - 1);
    for (std::size_t e = 0; e + 1 < nodes_.size(); ++e) {
        widths_[e] = nodes_[e + 1] - nodes_[e];
        if (!(widths_[e] > 0.0)) throw DomainError("grid: nodes must be strictly increasing");
    }
}

void LayerStack::validate() const {
    if (layers.empty()) throw DomainError("layer stack: at least one layer required");
    double total = 0.0;
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const Layer& l = layers[k];
        const std::string tag = "layer " + std::to_string(k + 1);
        if (!(l.thickness > 0.0)) throw DomainError(tag + ": thickness must be positive");
        if (!(l.mass > 0.0)) throw DomainError(tag + ": mass must be positive");
        if (!(l.eps > 0.0)) throw DomainError(tag + ": eps must be positive");
        total += l.thickness;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw DomainError("layer stack: thickness fractions must sum to 1 (got " +
                          std::to_string(total) + ")");
}

std::vector<double> LayerStack::interfaces() const {
    std::vector<double> c(layers.size() + 1, 0.0);
    for (std::size_t k = 0; k < layers.size(); ++k) c[k + 1] = c[k] + layers[k].thickness;
    c.back() = 1.0;
    return c;
}

NodalField::NodalField(GridPtr g, double fill) : grid(std::move(g)), values(grid->node_count(), fill) {}

ElementField::ElementField(GridPtr g, double fill)
    : grid(std::move(g)), values(grid->element_count(), fill) {}

GridPtr build_grid(std::size_t n, const LayerStack& stack) {
    stack.validate();
    const std::size_t layer_count = stack.layers.size();
    if (n < 2) throw InvalidRequestError("build_grid: need at least 2 elements");
    if (n < layer_count)
        throw InvalidRequestError("build_grid: resolution " + std::to_string(n) +
                                  " is smaller than the layer count " + std::to_string(layer_count));

    // One element per layer is guaranteed; the remainder is distributed
    // proportionally to thickness (largest-remainder rounding).
    std::vector<std::size_t> counts(layer_count, 1);
    const std::size_t extra = n - layer_count;
    std::vector<double> remainder(layer_count);
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < layer_count; ++k) {
        const double quota = static_cast<double>(extra) * stack.layers[k].thickness;
        const auto whole = static_cast<std::size_t>(std::floor(quota));
        counts[k] += whole;
        assigned += whole;
        remainder[k] = quota - static_cast<double>(whole);
    }
    std::vector<std::size_t> order(layer_count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; assigned < extra; ++i, ++assigned) counts[order[i % layer_count]] += 1;

    const std::vector<double> cuts = stack.interfaces();
    std::vector<double> nodes;
    nodes.reserve(n + 1);
    nodes.push_back(0.0);
    for (std::size_t k = 0; k < layer_count; ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        for (std::size_t i = 1; i < counts[k]; ++i)
            nodes.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(counts[k]));
        nodes.push_back(b);
    }
    return std::make_shared<Grid>(std::move(nodes));
}

MaterialProfile sample_layers(const LayerStack& stack, const GridPtr& grid) {
    stack.validate();
    const std::vector<double> cuts = stack.interfaces();
    MaterialProfile p{ElementField(grid), ElementField(grid), ElementField(grid), ElementField(grid)};
    for (std::size_t e = 0; e < grid->element_count(); ++e) {
        const double left = grid->node(e), right = grid->node(e + 1);
        const double mid = 0.5 * (left + right);
        const auto it = std::upper_bound(cuts.begin(), cuts.end(), mid);
        const std::size_t k = static_cast<std::size_t>(it - cuts.begin()) - 1;
        if (left < cuts[k] - 1e-12 || right > cuts[k + 1] + 1e-12)
            throw InvalidRequestError("sample_layers: element " + std::to_string(e) +
                                      " straddles a layer interface");
        p.mass[e] = stack.layers[k].mass;
        p.eps[e] = stack.layers[k].eps;
        p.band_offset[e] = stack.layers[k].band_offset;
        p.doping[e] = stack.layers[k].doping;
    }
    return p;
}

double integrate(const NodalField& f) {
    const auto& h = f.grid->widths();
    double s = 0.0;
    for (std::size_t e = 0; e < h.size(); ++e) s += 0.5 * h[e] * (f[e] + f[e + 1]);
    return s;
}

double norm_l1(const NodalField& f) {
    const auto& h = f.grid->widths();
    double s = 0.0;
    for (std::size_t e = 0; e < h.size(); ++e)
        s += 0.5 * h[e] * (std::fabs(f[e]) + std::fabs(f[e + 1]));
    return s;
}

double norm_l2(const NodalField& f) {
    const auto& h = f.grid->widths();
    double s = 0.0;
    for (std::size_t e = 0; e < h.size(); ++e) s += 0.5 * h[e] * (f[e] * f[e] + f[e + 1] * f[e + 1]);
    return std::sqrt(s);
}

double norm_w12(const NodalField& f) {
    const auto& h = f.grid->widths();
    double s = 0.0;
    for (std::size_t e = 0; e < h.size(); ++e) {
        s += 0.5 * h[e] * (f[e] * f[e] + f[e + 1] * f[e + 1]);
        const double df = f[e + 1] - f[e];
        s += df * df / h[e];
    }
    return std::sqrt(s);
}

double max_abs(const NodalField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::fabs(v));
    return m;
}

double min_value(const NodalField& f) {
    double m = f.values.empty() ? 0.0 : f.values.front();
    for (double v : f.values) m = std::min(m, v);
    return m;
}

namespace {

// sqrt(<D, w>) with (-d^2/dx^2 + 1) w = D, Dirichlet ends; `load` holds the
// dual pairing of D with the interior hat functions.
double dual_norm_from_load(const Grid& grid, const std::vector<double>& load) {
    const auto& h = grid.widths();
    const std::size_t k = grid.node_count() - 2;
    SymTridiag a;
    a.diag.resize(k);
    a.off.resize(k > 0 ? k - 1 : 0);
    for (std::size_t i = 1; i <= k; ++i) {
        a.diag[i - 1] = 1.0 / h[i - 1] + 1.0 / h[i] + 0.5 * (h[i - 1] + h[i]);
        if (i < k) a.off[i - 1] = -1.0 / h[i];
    }
    const std::vector<double> w = solve_spd(a, load);
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += load[i] * w[i];
    return std::sqrt(std::max(0.0, s));
}

}  // namespace

double dual_norm_wm12(const NodalField& density) {
    const auto& h = density.grid->widths();
    const std::size_t k = density.grid->node_count() - 2;
    std::vector<double> load(k);
    for (std::size_t i = 1; i <= k; ++i) load[i - 1] = 0.5 * (h[i - 1] + h[i]) * density[i];
    return dual_norm_from_load(*density.grid, load);
}

double dual_norm_wm12(const ElementField& density) {
    const auto& h = density.grid->widths();
    const std::size_t k = density.grid->node_count() - 2;
    std::vector<double> load(k);
    for (std::size_t i = 1; i <= k; ++i)
        load[i - 1] = 0.5 * (density[i - 1] * h[i - 1] + density[i] * h[i]);
    return dual_norm_from_load(*density.grid, load);
}

NodalField element_to_nodal(const ElementField& f) {
    const auto& h = f.grid->widths();
    NodalField out(f.grid);
    const std::size_t n = f.grid->element_count();
    out[0] = f[0];
    for (std::size_t i = 1; i < n; ++i)
        out[i] = (f[i - 1] * h[i - 1] + f[i] * h[i]) / (h[i - 1] + h[i]);
    out[n] = f[n - 1];
    return out;
}

}  // namespace ks1d
