#include "ks1d/xc.hpp"

#include <cmath>
#include <string>

#include "ks1d/errors.hpp"

namespace ks1d {

XcModel XcModel::xalpha(double coupling, double exponent) {
    if (!(coupling >= 0.0)) throw DomainError("xc: coupling C must be nonnegative");
    if (!(exponent > 0.0 && exponent <= 1.0)) throw DomainError("xc: alpha must lie in (0, 1]");
    return XcModel{coupling, exponent};
}

NodalField evaluate_vxc(const XcModel& model, const NodalField& density) {
    NodalField v(density.grid);
    if (!model.active()) return v;
    for (std::size_t i = 0; i < density.size(); ++i) {
        double u = density[i];
        if (u < 0.0) {
            if (u < -1e-12)
                throw DomainError("xc: negative density " + std::to_string(u) + " at node " +
                                  std::to_string(i));
            u = 0.0;
        }
        v[i] = -model.coupling * std::pow(u, model.exponent);
    }
    return v;
}

}  // namespace ks1d
