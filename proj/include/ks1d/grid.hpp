#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace ks1d {

// Partition 0 = x_0 < x_1 < ... < x_n = 1 of the device domain.
class Grid {
  public:
    explicit Grid(std::vector<double> nodes);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t element_count() const { return nodes_.size() - 1; }
    double node(std::size_t i) const { return nodes_[i]; }
    double width(std::size_t e) const { return widths_[e]; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& widths() const { return widths_; }

  private:
    std::vector<double> nodes_;
    std::vector<double> widths_;
};

using GridPtr = std::shared_ptr<const Grid>;

struct Layer {
    double thickness = 1.0;    // fraction of the domain
    double mass = 1.0;         // effective mass (scaled)
    double eps = 1.0;          // dielectric permittivity (scaled)
    double band_offset = 0.0;  // band-edge offset (scaled energy)
    double doping = 0.0;       // ionized dopant density (scaled)
};

// Layered material description; thickness fractions must sum to one.
struct LayerStack {
    std::vector<Layer> layers;

    void validate() const;
    // Cumulative layer boundaries including 0 and 1.
    std::vector<double> interfaces() const;
};

// Values at every node of a grid.
struct NodalField {
    GridPtr grid;
    std::vector<double> values;

    NodalField() = default;
    explicit NodalField(GridPtr g, double fill = 0.0);

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
};

// One value per element; carries the piecewise-constant coefficients.
struct ElementField {
    GridPtr grid;
    std::vector<double> values;

    ElementField() = default;
    explicit ElementField(GridPtr g, double fill = 0.0);

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t e) const { return values[e]; }
    double& operator[](std::size_t e) { return values[e]; }
};

struct MaterialProfile {
    ElementField mass;
    ElementField eps;
    ElementField band_offset;
    ElementField doping;
};

// Mesh with n elements whose node set contains every layer interface exactly;
// the remaining nodes fill each layer quasi-uniformly.
GridPtr build_grid(std::size_t n, const LayerStack& stack);

// Piecewise-constant coefficients of the stack on a grid aligned with it.
MaterialProfile sample_layers(const LayerStack& stack, const GridPtr& grid);

double integrate(const NodalField& f);  // composite trapezoid
double norm_l1(const NodalField& f);
double norm_l2(const NodalField& f);
// Full Sobolev norm sqrt(||f||_L2^2 + ||f'||_L2^2), f' the element-wise
// difference quotient.
double norm_w12(const NodalField& f);
double max_abs(const NodalField& f);
double min_value(const NodalField& f);

// W^{-1,2} dual norm realized through the Riesz map of -d^2/dx^2 + 1 with
// homogeneous Dirichlet conditions.
double dual_norm_wm12(const NodalField& density);
double dual_norm_wm12(const ElementField& density);

// Lumped L2 projection of element values onto nodes.
NodalField element_to_nodal(const ElementField& f);

}  // namespace ks1d
