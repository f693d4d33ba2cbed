#pragma once

#include "ks1d/grid.hpp"

namespace ks1d {

// Local exchange-correlation model V_xc(u) = -C u^alpha; C = 0 disables it.
struct XcModel {
    double coupling = 0.0;  // C >= 0
    double exponent = 1.0;  // alpha in (0, 1]

    static XcModel none() { return {}; }
    static XcModel xalpha(double coupling, double exponent);

    bool active() const { return coupling > 0.0; }
};

// Nodewise evaluation; rejects densities more negative than -1e-12 and clips
// smaller excursions to zero.
NodalField evaluate_vxc(const XcModel& model, const NodalField& density);

}  // namespace ks1d
