#pragma once

#include "ks1d/grid.hpp"

namespace ks1d {

// A layered structure sampled onto its grid, plus the contact potentials.
struct Device {
    GridPtr grid;
    MaterialProfile profile;
    double phi0 = 0.0;
    double phi1 = 0.0;
};

Device make_device(const LayerStack& stack, std::size_t n, double phi0 = 0.0, double phi1 = 0.0);

// Band offsets as a nodal potential (lumped projection of the element values).
NodalField band_offset_potential(const Device& device);

}  // namespace ks1d
