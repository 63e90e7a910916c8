#include "fene/stress.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fene {

StressTensor kramers_stress(const PhaseDensity& psi, const ConfigGrid& grid,
                            const PotentialParams& params) {
    if (static_cast<int>(psi.values.size()) != grid.size())
        throw std::invalid_argument("kramers_stress: psi does not match grid");
    StressTensor tau;
    const double k = params.k;
    // The singular factor r^2/(1-r^2) is folded into psi_inf analytically:
    // with g = psi/psi_inf cellwise constant, the ring integral of
    // 2k psi_inf r^2/(1-r^2) r dr is exact, via the antiderivative of
    // r^3 (1-r^2)^{k-1}. This makes tau(psi_inf) = I exact in the radial
    // direction on any grid.
    auto antiderivative = [k](double r) {
        const double q = 1.0 - r * r;
        return -0.5 * (r * r * std::pow(q, k) / k + std::pow(q, k + 1.0) / (k * (k + 1.0)));
    };
    const double dtheta = grid.dtheta();
    for (int i = 0; i < grid.nr(); ++i) {
        const double r = grid.r_center(i);
        const double winf_c = equilibrium_density_radial(r, params);
        const double ring = 2.0 * k * (k + 1.0) / std::numbers::pi *
                            (antiderivative(grid.r_face(i + 1)) - antiderivative(grid.r_face(i)));
        const double w = ring / winf_c * dtheta;
        for (int j = 0; j < grid.ntheta(); ++j) {
            const double th = grid.theta_center(j);
            const double c = std::cos(th), s = std::sin(th);
            const double p = psi.values[grid.index(i, j)];
            if (!std::isfinite(p))
                throw std::domain_error("kramers_stress: non-finite density value");
            tau.xx += w * p * c * c;
            tau.xy += w * p * c * s;
            tau.yy += w * p * s * s;
        }
    }
    if (!std::isfinite(tau.xx) || !std::isfinite(tau.xy) || !std::isfinite(tau.yy))
        throw std::domain_error("kramers_stress: non-finite stress");
    return tau;
}

StressBoundReport stress_bound_check(const PhaseDensity& psi, const ConfigGrid& grid,
                                     const PotentialParams& params) {
    StressBoundReport rep;
    rep.lhs = kramers_stress(psi, grid, params).frobenius_sq();
    rep.mass = quadrature(psi.values, grid);

    const std::vector<double> winf = equilibrium_samples(grid, params);
    std::vector<double> h(grid.size());
    for (int c = 0; c < grid.size(); ++c) {
        if (psi.values[c] <= 0.0) rep.zero_cells = rep.zero_cells || psi.values[c] == 0.0;
        h[c] = std::sqrt(std::max(psi.values[c], 0.0) / winf[c]);
    }
    const std::vector<double> grad_sq = polar_gradient_sq(h, grid);
    std::vector<double> integrand(grid.size());
    for (int c = 0; c < grid.size(); ++c) integrand[c] = winf[c] * grad_sq[c];
    rep.fisher = quadrature(integrand, grid);

    rep.rhs = rep.mass * (rep.fisher + rep.mass);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    return rep;
}

}  // namespace fene
