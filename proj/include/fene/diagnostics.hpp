#pragma once

#include <vector>

#include "fene/core.hpp"
#include "fene/macro_flow.hpp"

namespace fene {

/// One record of the a-priori functionals tracked along a trajectory.
struct LedgerRow {
    double t = 0.0;
    double free_energy = 0.0;
    double kinetic = 0.0;
    double rel_entropy = 0.0;
    double diss_u = 0.0;    ///< nu * integral |grad u|^2
    double diss_psi = 0.0;  ///< 4 * integral psi_inf |grad sqrt(psi/psi_inf)|^2
    double n1 = 0.0;
    double n2 = 0.0;
    double residual = 0.0;  ///< free-energy balance residual of this step
};

struct DiagnosticsLedger {
    std::vector<LedgerRow> rows;
};

/// Shifted density psi~ = psi + a psi_inf with a > 1, so psi~/psi_inf >= a
/// and its logarithm stays positive.
struct ShiftedDensity {
    double a = 8.0;
    std::vector<double> values;
};

ShiftedDensity make_shifted(const PhaseDensity& psi, double a, const ConfigGrid& grid,
                            const PotentialParams& params);

/// Numerically verifies that x [log^2 x - 2 log x + c1] + c2 with
/// c1 = 2 - log^2(1+a), c2 = 2(1+a)(log(1+a) - 1) stays nonnegative on
/// [a, inf); the shift constant must be large enough for this.
bool shift_constant_admissible(double a);

/// Relative entropy against rho_ref * psi_inf, evaluated cancellation-free
/// as integral of rho_ref psi_inf (x log x - x + 1) with x = psi/(rho_ref
/// psi_inf) and the convention 0 log 0 = 0.
double relative_entropy(const PhaseDensity& psi, const ConfigGrid& grid,
                        const PotentialParams& params, double rho_ref);

/// Homogeneous free energy: relative entropy with rho_ref = mass(psi).
double free_energy_homogeneous(const PhaseDensity& psi, const ConfigGrid& grid,
                               const PotentialParams& params);

/// Coupled free energy: spatial sum of the per-point relative entropies
/// (each against its own rho(x)) plus the kinetic energy of u.
double free_energy(const std::vector<PhaseDensity>& psi_field, const MacroState& macro,
                   const ConfigGrid& grid, const PotentialParams& params);

/// 4 * integral psi_inf |grad sqrt(psi/psi_inf)|^2. If psi has zero cells
/// the gradient is still formed (with sqrt clamped at 0) and the
/// reduced-accuracy flag is raised.
double entropy_dissipation(const PhaseDensity& psi, const ConfigGrid& grid,
                           const PotentialParams& params, bool* reduced_accuracy = nullptr);

/// |F(t_{n+1}) - F(t_n) + dt (diss_u + diss_psi - work)| with work the
/// kappa : tau power input of a driven run (0 for the closed system).
double balance_residual(double f_prev, double f_next, double dt, double diss_u, double diss_psi,
                        double work);

/// N1 = integral psi~ log(psi~/psi_inf).
double n1_norm(const PhaseDensity& psi, double a, const ConfigGrid& grid,
               const PotentialParams& params);

/// N2 = sqrt( integral psi~ [log^2(psi~/psi_inf) - 2 log(psi~/psi_inf) + 2] ).
double n2_norm(const PhaseDensity& psi, double a, const ConfigGrid& grid,
               const PotentialParams& params);

/// integral psi_inf |grad sqrt(psi~/psi_inf)|^2 log(psi~/psi_inf); positive
/// because the log never drops below log a.
double log2_dissipation(const PhaseDensity& psi, double a, const ConfigGrid& grid,
                        const PotentialParams& params);

struct Log2Report {
    std::vector<double> t;
    std::vector<double> n2;
    std::vector<double> running_dissipation;  ///< integral of log2_dissipation / N2
    std::vector<double> lhs;                  ///< n2 + running_dissipation
    double fitted_c = 0.0;  ///< sup_t (lhs - n2(0)) / integral |grad u|^2
    bool bounded = false;   ///< lhs stayed below n2(0) + fitted_c * work integral
};

/// Evaluates the log^2 ledger along stored snapshots. grad_u_sq holds the
/// instantaneous integral |grad u|^2 at each snapshot time (|kappa|^2 for a
/// driven homogeneous run, 0 for relaxation).
Log2Report log2_ledger_check(const std::vector<double>& times,
                             const std::vector<PhaseDensity>& snapshots,
                             const std::vector<double>& grad_u_sq, double a,
                             const ConfigGrid& grid, const PotentialParams& params);

}  // namespace fene
