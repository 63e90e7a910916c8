#include "fene/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fene {

namespace {

double xlogx_m1(double x) {
    // x log x - x + 1, nonnegative, with 0 log 0 = 0.
    if (x < 1e-300) return 1.0;
    return x * std::log(x) - x + 1.0;
}

}  // namespace

ShiftedDensity make_shifted(const PhaseDensity& psi, double a, const ConfigGrid& grid,
                            const PotentialParams& params) {
    if (!(a > 1.0)) throw std::invalid_argument("make_shifted: a must be > 1");
    if (static_cast<int>(psi.values.size()) != grid.size())
        throw std::invalid_argument("make_shifted: psi does not match grid");
    ShiftedDensity out;
    out.a = a;
    out.values = equilibrium_samples(grid, params);
    for (int c = 0; c < grid.size(); ++c) out.values[c] = psi.values[c] + a * out.values[c];
    return out;
}

bool shift_constant_admissible(double a) {
    if (!(a > 1.0)) return false;
    const double c1 = 2.0 - std::pow(std::log(1.0 + a), 2);
    const double c2 = 2.0 * (1.0 + a) * (std::log(1.0 + a) - 1.0);
    for (int i = 0; i <= 20000; ++i) {
        const double x = a * std::exp(i * 1e-3);  // covers [a, a e^20]
        const double lx = std::log(x);
        if (x * (lx * lx - 2.0 * lx + c1) + c2 < 0.0) return false;
    }
    return true;
}

double relative_entropy(const PhaseDensity& psi, const ConfigGrid& grid,
                        const PotentialParams& params, double rho_ref) {
    if (!(rho_ref > 0.0)) throw std::invalid_argument("relative_entropy: rho_ref must be > 0");
    const std::vector<double> winf = equilibrium_samples(grid, params);
    std::vector<double> integrand(grid.size());
    for (int c = 0; c < grid.size(); ++c) {
        const double w = rho_ref * winf[c];
        integrand[c] = w * xlogx_m1(psi.values[c] / w);
    }
    return quadrature(integrand, grid);
}

double free_energy_homogeneous(const PhaseDensity& psi, const ConfigGrid& grid,
                               const PotentialParams& params) {
    return relative_entropy(psi, grid, params, psi.mass);
}

double free_energy(const std::vector<PhaseDensity>& psi_field, const MacroState& macro,
                   const ConfigGrid& grid, const PotentialParams& params) {
    const double cell = (2.0 * std::numbers::pi / macro.nx) * (2.0 * std::numbers::pi / macro.ny);
    if (psi_field.size() != static_cast<size_t>(macro.nx) * macro.ny)
        throw std::invalid_argument("free_energy: field sizes do not match");
    double f = 0.0;
    for (const PhaseDensity& psi : psi_field)
        f += cell * relative_entropy(psi, grid, params, psi.mass);
    return f + kinetic_energy(macro);
}

double entropy_dissipation(const PhaseDensity& psi, const ConfigGrid& grid,
                           const PotentialParams& params, bool* reduced_accuracy) {
    const std::vector<double> winf = equilibrium_samples(grid, params);
    std::vector<double> h(grid.size());
    bool zeros = false;
    for (int c = 0; c < grid.size(); ++c) {
        if (psi.values[c] <= 0.0) zeros = true;
        h[c] = std::sqrt(std::max(psi.values[c], 0.0) / winf[c]);
    }
    if (reduced_accuracy) *reduced_accuracy = zeros;
    const std::vector<double> grad_sq = polar_gradient_sq(h, grid);
    std::vector<double> integrand(grid.size());
    for (int c = 0; c < grid.size(); ++c) integrand[c] = winf[c] * grad_sq[c];
    return 4.0 * quadrature(integrand, grid);
}

double balance_residual(double f_prev, double f_next, double dt, double diss_u, double diss_psi,
                        double work) {
    return std::abs(f_next - f_prev + dt * (diss_u + diss_psi - work));
}

double n1_norm(const PhaseDensity& psi, double a, const ConfigGrid& grid,
               const PotentialParams& params) {
    const ShiftedDensity sh = make_shifted(psi, a, grid, params);
    const std::vector<double> winf = equilibrium_samples(grid, params);
    std::vector<double> integrand(grid.size());
    for (int c = 0; c < grid.size(); ++c)
        integrand[c] = sh.values[c] * std::log(sh.values[c] / winf[c]);
    return quadrature(integrand, grid);
}

double n2_norm(const PhaseDensity& psi, double a, const ConfigGrid& grid,
               const PotentialParams& params) {
    const ShiftedDensity sh = make_shifted(psi, a, grid, params);
    const std::vector<double> winf = equilibrium_samples(grid, params);
    std::vector<double> integrand(grid.size());
    for (int c = 0; c < grid.size(); ++c) {
        const double lg = std::log(sh.values[c] / winf[c]);
        integrand[c] = sh.values[c] * (lg * lg - 2.0 * lg + 2.0);
    }
    return std::sqrt(quadrature(integrand, grid));
}

double log2_dissipation(const PhaseDensity& psi, double a, const ConfigGrid& grid,
                        const PotentialParams& params) {
    const ShiftedDensity sh = make_shifted(psi, a, grid, params);
    const std::vector<double> winf = equilibrium_samples(grid, params);
    std::vector<double> h(grid.size());
    for (int c = 0; c < grid.size(); ++c) h[c] = std::sqrt(sh.values[c] / winf[c]);
    const std::vector<double> grad_sq = polar_gradient_sq(h, grid);
    std::vector<double> integrand(grid.size());
    for (int c = 0; c < grid.size(); ++c)
        integrand[c] = winf[c] * grad_sq[c] * std::log(sh.values[c] / winf[c]);
    return quadrature(integrand, grid);
}

Log2Report log2_ledger_check(const std::vector<double>& times,
                             const std::vector<PhaseDensity>& snapshots,
                             const std::vector<double>& grad_u_sq, double a,
                             const ConfigGrid& grid, const PotentialParams& params) {
    if (times.size() != snapshots.size() || times.size() != grad_u_sq.size() || times.empty())
        throw std::invalid_argument("log2_ledger_check: trajectory arrays must match and be nonempty");
    Log2Report rep;
    rep.t = times;
    rep.n2.resize(times.size());
    rep.running_dissipation.assign(times.size(), 0.0);
    rep.lhs.resize(times.size());
    double work_integral = 0.0;
    for (size_t n = 0; n < times.size(); ++n) {
        rep.n2[n] = n2_norm(snapshots[n], a, grid, params);
        if (n > 0) {
            const double dt = times[n] - times[n - 1];
            rep.running_dissipation[n] =
                rep.running_dissipation[n - 1] +
                dt * log2_dissipation(snapshots[n], a, grid, params) / rep.n2[n];
            work_integral += dt * grad_u_sq[n];
            const double gain = rep.n2[n] + rep.running_dissipation[n] - rep.n2[0];
            if (work_integral > 0.0) rep.fitted_c = std::max(rep.fitted_c, gain / work_integral);
        }
        rep.lhs[n] = rep.n2[n] + rep.running_dissipation[n];
    }
    rep.bounded = true;
    double wi = 0.0;
    for (size_t n = 1; n < times.size(); ++n) {
        wi += (times[n] - times[n - 1]) * grad_u_sq[n];
        if (rep.lhs[n] > rep.n2[0] + rep.fitted_c * wi + 1e-10) rep.bounded = false;
    }
    return rep;
}

}  // namespace fene
