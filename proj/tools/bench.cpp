// Timing comparison of the serial reference kernels against the OpenMP
// versions, plus a whole-solver run at one and at all threads. The outputs
// must match bit for bit; the max |diff| columns assert that.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "ks1d/parallel.hpp"
#include "ks1d/scf.hpp"

using namespace ks1d;

namespace {

double seconds(const std::function<void()>& body) {
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

double max_diff(const NodalField& a, const NodalField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", max_threads());

    LayerStack stack;
    stack.layers = {Layer{0.3, 1.0, 1.0, 0.25, 0.0}, Layer{0.4, 0.7, 2.0, 0.0, 0.5},
                    Layer{0.3, 1.0, 1.0, 0.25, 0.0}};
    const Device device = make_device(stack, 6000);
    const NodalField zero(device.grid, 0.0);
    const DiscreteOperator op = assemble_schrodinger(device.grid, device.profile.mass, zero);
    const std::size_t levels = 96;

    std::printf("%-28s %10s %10s %8s %12s\n", "kernel", "serial[s]", "openmp[s]", "speedup",
                "max|diff|");

    Spectrum spec_serial, spec_parallel;
    const double t_eig_s = seconds([&] { spec_serial = lowest_eigenpairs(op, levels, Exec::Serial); });
    const double t_eig_p =
        seconds([&] { spec_parallel = lowest_eigenpairs(op, levels, Exec::Parallel); });
    double eig_diff = 0.0;
    for (std::size_t l = 0; l < levels; ++l) {
        eig_diff = std::max(eig_diff,
                            std::fabs(spec_serial.eigenvalues[l] - spec_parallel.eigenvalues[l]));
        eig_diff = std::max(eig_diff, max_diff(spec_serial.eigenfunctions[l],
                                               spec_parallel.eigenfunctions[l]));
    }
    std::printf("%-28s %10.4f %10.4f %8.2f %12.3e\n", "lowest_eigenpairs", t_eig_s, t_eig_p,
                t_eig_s / t_eig_p, eig_diff);

    OccupationSummary occ;
    occ.mu = 0.0;
    occ.occupations.assign(levels, 1.0 / static_cast<double>(levels));
    occ.truncation_level = levels;
    NodalField dens_serial, dens_parallel;
    const double t_den_s =
        seconds([&] { dens_serial = particle_density(spec_serial, occ, Exec::Serial); });
    const double t_den_p =
        seconds([&] { dens_parallel = particle_density(spec_serial, occ, Exec::Parallel); });
    std::printf("%-28s %10.4f %10.4f %8.2f %12.3e\n", "particle_density", t_den_s, t_den_p,
                t_den_s / t_den_p, max_diff(dens_serial, dens_parallel));

    const Device well = make_device(LayerStack{{Layer{}}}, 2000);
    ScfConfig config;
    config.particles = 2.0;
    const DistributionFunction f = DistributionFunction::fermi(4.0);

    ScfResult run_one, run_all;
#ifdef _OPENMP
    const int previous = omp_get_max_threads();
    omp_set_num_threads(1);
#endif
    const double t_scf_s = seconds([&] { run_one = solve_scf(well, f, XcModel::none(), config); });
#ifdef _OPENMP
    omp_set_num_threads(previous);
#endif
    const double t_scf_p = seconds([&] { run_all = solve_scf(well, f, XcModel::none(), config); });
    std::printf("%-28s %10.4f %10.4f %8.2f %12.3e\n", "solve_scf (1 vs all threads)", t_scf_s,
                t_scf_p, t_scf_s / t_scf_p, max_diff(run_one.density, run_all.density));

    return 0;
}
