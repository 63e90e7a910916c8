#pragma once

#include "fene/core.hpp"

namespace fene {

/// Symmetric 2x2 Kramers stress.
struct StressTensor {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    double frobenius_sq() const { return xx * xx + 2.0 * xy * xy + yy * yy; }
};

/// Kramers stress tau_ij = 2k * integral of psi R_i R_j / (1 - |R|^2).
/// Symmetric by construction; throws on a non-finite integrand.
StressTensor kramers_stress(const PhaseDensity& psi, const ConfigGrid& grid,
                            const PotentialParams& params);

/// Both sides of the dissipation-based stress bound: the squared stress
/// against mass times (entropy dissipation + mass).
struct StressBoundReport {
    double lhs = 0.0;     ///< |tau(psi)|^2 (Frobenius)
    double fisher = 0.0;  ///< integral psi_inf |grad sqrt(psi/psi_inf)|^2
    double mass = 0.0;
    double rhs = 0.0;     ///< mass * (fisher + mass)
    double ratio = 0.0;   ///< lhs / rhs
    bool zero_cells = false;  ///< psi vanished somewhere; bound reported against mass term
};

StressBoundReport stress_bound_check(const PhaseDensity& psi, const ConfigGrid& grid,
                                     const PotentialParams& params);

}  // namespace fene
