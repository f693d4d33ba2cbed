#pragma once

#include <filesystem>
#include <string>

#include "ks1d/device.hpp"
#include "ks1d/scf.hpp"

namespace ks1d {

// Parsed and validated device configuration. Sections:
//   [device.layer.k] [boundary] [particles] [statistics] [xc] [grid] [scf] [output]
// plus an optional header (before any section) declaring the unit system.
struct DeviceConfig {
    LayerStack stack;
    double phi0 = 0.0;
    double phi1 = 0.0;
    double particles = 1.0;
    double charge = 1.0;
    bool zero_temperature = true;
    double beta = 0.0;       // used when !zero_temperature
    double stat_scale = 1.0;  // c_perp prefactor of the distribution function
    XcModel xc = XcModel::none();
    std::size_t grid_n = 1000;
    double damping = 0.3;
    double tol_l1 = 1e-9;
    std::size_t max_iter = 200;
    double tail_tol = 1e-10;
    bool adaptive_damping = false;
    std::string profile_name = "profile.csv";
    std::string summary_name = "summary.txt";

    Device device() const;
    DistributionFunction distribution() const;
    ScfConfig scf() const;
};

// Throws ConfigError naming the offending key and constraint.
DeviceConfig parse_config(const std::string& text);

DeviceConfig load_config(const std::filesystem::path& path);

}  // namespace ks1d
