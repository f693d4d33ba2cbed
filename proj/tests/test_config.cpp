#include <doctest.h>

#include "ks1d/config.hpp"
#include "ks1d/errors.hpp"

using namespace ks1d;

namespace {

const char* benchmark_text = R"(
# benchmark quantum well
[device.layer.1]
thickness = 1.0
m = 1.0
eps = 1.0

[particles]
N = 1.0
q = 1.0

[statistics]
type = fermi
beta = 1.0

[grid]
n = 400

[scf]
tau = 0.3
tol_l1 = 1e-9
)";

}  // namespace

TEST_SUITE_BEGIN("config");

TEST_CASE("minimal single-layer config parses with defaults") {
    const DeviceConfig c = parse_config("[device.layer.1]\nthickness = 1.0\n");
    CHECK(c.stack.layers.size() == 1);
    CHECK(c.particles == 1.0);
    CHECK(c.charge == 1.0);
    CHECK(c.zero_temperature);
    CHECK(c.grid_n == 1000);
    CHECK(c.damping == 0.3);
    CHECK(!c.xc.active());
    CHECK(c.profile_name == "profile.csv");
}

TEST_CASE("full config round-trips the values") {
    const DeviceConfig c = parse_config(benchmark_text);
    CHECK(c.stack.layers.size() == 1);
    CHECK(!c.zero_temperature);
    CHECK(c.beta == 1.0);
    CHECK(c.grid_n == 400);
    CHECK(c.tol_l1 == 1e-9);
    const Device d = c.device();
    CHECK(d.grid->element_count() == 400);
}

TEST_CASE("thickness violations are reported by name") {
    const char* text = R"(
[device.layer.1]
thickness = 0.5
[device.layer.2]
thickness = 0.6
)";
    CHECK_THROWS_WITH_AS((void)parse_config(text), doctest::Contains("thickness"), ConfigError);
}

TEST_CASE("beta and kT are mutually exclusive") {
    const char* text = R"(
[device.layer.1]
[statistics]
type = fermi
beta = 1.0
kT = 1.0
)";
    CHECK_THROWS_WITH_AS((void)parse_config(text), doctest::Contains("either beta or kT"),
                         ConfigError);
}

TEST_CASE("kT is translated into beta") {
    const char* text = R"(
[device.layer.1]
[statistics]
type = fermi
kT = 0.25
)";
    const DeviceConfig c = parse_config(text);
    CHECK(c.beta == 4.0);
}

TEST_CASE("unknown keys name the valid alternatives") {
    const char* text = R"(
[device.layer.1]
thiccness = 1.0
)";
    CHECK_THROWS_WITH_AS((void)parse_config(text), doctest::Contains("thickness"), ConfigError);

    const char* bad_section = "[devices]\nx = 1\n";
    CHECK_THROWS_WITH_AS((void)parse_config(bad_section), doctest::Contains("valid sections"),
                         ConfigError);
}

TEST_CASE("physical units derive the transversal prefactor") {
    const char* text = R"(
units = physical
hbar = 2.0
m_perp = 4.0

[device.layer.1]
)";
    const DeviceConfig c = parse_config(text);
    CHECK(c.stat_scale == doctest::Approx(4.0 / (2.0 * 3.14159265358979312 * 4.0)).epsilon(1e-12));

    const char* conflict = R"(
units = physical
hbar = 1.0
m_perp = 1.0

[device.layer.1]
[statistics]
type = zeroT
scale = 2.0
)";
    CHECK_THROWS_AS((void)parse_config(conflict), ConfigError);
}

TEST_CASE("constraint violations surface as config errors") {
    CHECK_THROWS_AS((void)parse_config("[device.layer.1]\nm = 0.0\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("[device.layer.1]\neps = -1.0\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("[device.layer.1]\n[particles]\nN = 0.5\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("[device.layer.1]\n[grid]\nn = 1\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("[device.layer.1]\n[scf]\ntau = 1.5\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("[device.layer.1]\n[statistics]\ntype = fermi\n"),
                    ConfigError);
    CHECK_THROWS_AS((void)parse_config("[device.layer.1]\n[xc]\ntype = xalpha\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("[device.layer.1]\n[xc]\ntype = none\nC = 1\n"),
                    ConfigError);
    CHECK_THROWS_AS((void)parse_config("[device.layer.2]\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("[device.layer.1]\nthickness = 1\nthickness = 1\n"),
                    ConfigError);
}

TEST_CASE("layer gaps are rejected") {
    const char* text = R"(
[device.layer.1]
thickness = 0.5
[device.layer.3]
thickness = 0.5
)";
    CHECK_THROWS_WITH_AS((void)parse_config(text), doctest::Contains("contiguous"), ConfigError);
}

TEST_SUITE_END();
