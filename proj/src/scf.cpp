#include "ks1d/scf.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ks1d/errors.hpp"
#include "ks1d/operators.hpp"

namespace ks1d {

Device make_device(const LayerStack& stack, std::size_t n, double phi0, double phi1) {
    Device d;
    d.grid = build_grid(n, stack);
    d.profile = sample_layers(stack, d.grid);
    d.phi0 = phi0;
    d.phi1 = phi1;
    return d;
}

NodalField band_offset_potential(const Device& device) {
    return element_to_nodal(device.profile.band_offset);
}

void ScfConfig::validate() const {
    if (!(particles >= 1.0)) throw DomainError("scf: particle number must be >= 1");
    if (!(damping > 0.0 && damping <= 1.0)) throw DomainError("scf: damping must lie in (0, 1]");
    if (!(tol_l1 > 0.0)) throw DomainError("scf: tol_l1 must be positive");
    if (max_iter < 1) throw DomainError("scf: max_iter must be >= 1");
    if (!(tail_tol > 0.0)) throw DomainError("scf: tail_tol must be positive");
    if (!std::isfinite(charge)) throw DomainError("scf: charge must be finite");
}

NodalField effective_potential(const NodalField& density, const Device& device, const XcModel& xc,
                               const ScfConfig& config) {
    const NodalField phi = solve_poisson(device.grid, device.profile.eps, device.profile.doping,
                                         density, config.charge, device.phi0, device.phi1);
    NodalField v = band_offset_potential(device);
    if (xc.active()) {
        const NodalField vxc = evaluate_vxc(xc, density);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += vxc[i];
    }
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= config.charge * phi[i];
    return v;
}

NodalField kohn_sham_map(const NodalField& density, const Device& device,
                         const DistributionFunction& f, const XcModel& xc,
                         const ScfConfig& config) {
    const NodalField v = effective_potential(density, device, xc, config);
    return density_operator(v, f, config.particles, device.profile.mass, config.tail_tol).density;
}

namespace {

double l1_distance(const NodalField& a, const NodalField& b) {
    NodalField diff(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
    return norm_l1(diff);
}

NodalField initial_density(const Device& device, const ScfConfig& config,
                           const std::optional<NodalField>& initial) {
    if (!initial) return NodalField(device.grid, config.particles);
    NodalField u = *initial;
    if (u.size() != device.grid->node_count())
        throw InvalidRequestError("scf: initial density does not match the device grid");
    for (double v : u.values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw DomainError("scf: initial density must be nonnegative and finite");
    const double total = integrate(u);
    if (!(total > 0.0)) throw DomainError("scf: initial density integrates to zero");
    const double rescale = config.particles / total;
    for (double& v : u.values) v *= rescale;
    return u;
}

}  // namespace

ScfResult solve_scf(const Device& device, const DistributionFunction& f, const XcModel& xc,
                    const ScfConfig& config, const std::optional<NodalField>& initial) {
    config.validate();

    NodalField u = initial_density(device, config, initial);
    double tau = config.damping;

    ScfResult result;
    result.converged = false;
    for (std::size_t k = 0; k < config.max_iter; ++k) {
        const NodalField mapped = kohn_sham_map(u, device, f, xc, config);
        NodalField next(u.grid);
        for (std::size_t i = 0; i < u.size(); ++i)
            next[i] = (1.0 - tau) * u[i] + tau * mapped[i];
        const double residual = l1_distance(next, u);
        if (!std::isfinite(residual))
            throw NumericalError("scf: non-finite iterate at iteration " + std::to_string(k));
        result.residual_history.push_back(residual);
        result.damping_history.push_back(tau);
        u = std::move(next);
        if (residual <= tau * config.tol_l1) {
            result.converged = true;
            result.iterations = k + 1;
            break;
        }
        if (config.adaptive_damping && k >= 1 &&
            residual > result.residual_history[k - 1])
            tau = std::max(0.5 * tau, 1e-4);
    }
    if (!result.converged) result.iterations = config.max_iter;

    // Diagnostics at the final iterate.
    result.v_eff = effective_potential(u, device, xc, config);
    DensityResult mapped =
        density_operator(result.v_eff, f, config.particles, device.profile.mass, config.tail_tol);
    result.fixed_point_residual = l1_distance(mapped.density, u);
    result.phi = solve_poisson(device.grid, device.profile.eps, device.profile.doping, u,
                               config.charge, device.phi0, device.phi1);
    result.spectrum = std::move(mapped.spectrum);
    result.occupation = std::move(mapped.occupation);
    result.density = std::move(u);
    return result;
}

ContinuationResult temperature_continuation(const Device& device, const std::vector<double>& betas,
                                            const XcModel& xc, const ScfConfig& config) {
    if (betas.empty()) throw InvalidRequestError("continuation: empty beta schedule");
    for (std::size_t j = 0; j + 1 < betas.size(); ++j)
        if (!(betas[j] < betas[j + 1]))
            throw InvalidRequestError("continuation: beta schedule must be strictly increasing");
    for (std::size_t j = 0; j + 1 < betas.size(); ++j)
        if (std::isinf(betas[j]))
            throw InvalidRequestError("continuation: only the last stage may be zero temperature");

    ContinuationResult out;
    std::optional<NodalField> warm;
    for (double beta : betas) {
        const DistributionFunction f = std::isinf(beta)
                                           ? DistributionFunction::zero_temperature()
                                           : DistributionFunction::fermi(beta);
        ScfResult stage = solve_scf(device, f, xc, config, warm);
        warm = stage.density;
        out.stages.push_back({beta, std::move(stage), 0.0, 0.0});
    }

    if (std::isinf(betas.back())) {
        out.zero_temperature = out.stages.back().result;
    } else {
        out.zero_temperature =
            solve_scf(device, DistributionFunction::zero_temperature(), xc, config, warm);
    }

    for (ContinuationStage& stage : out.stages) {
        stage.distance_u_l1 = l1_distance(stage.result.density, out.zero_temperature.density);
        double linf = 0.0;
        for (std::size_t i = 0; i < stage.result.phi.size(); ++i)
            linf = std::max(linf,
                            std::fabs(stage.result.phi[i] - out.zero_temperature.phi[i]));
        stage.distance_phi_linf = linf;
    }
    return out;
}

}  // namespace ks1d
