#pragma once

#include <memory>

#include "fene/core.hpp"

namespace fene {

/// Trace-free velocity gradient seen by the configuration equation.
struct VelocityGradient {
    Mat2 kappa{{{0.0, 0.0}, {0.0, 0.0}}};

    /// Throws if |trace| > 1e-14.
    void validate() const;
    bool is_zero() const;
};

/// Finite-volume solver for the configuration Fokker-Planck equation at a
/// single spatial point,
///   dt psi = div_R[ -kappa R psi + psi_inf grad(psi/psi_inf) ],
/// with zero total flux through the disk boundary.
///
/// The diffusion is written in the weighted form g = psi/psi_inf with the
/// face weight psi_inf taken as the geometric mean of the adjacent cell
/// values, so psi_inf is an exact discrete steady state and the degenerate
/// weight (1-r^2)^k shuts the boundary flux off naturally. Time stepping is
/// IMEX: the weighted diffusion is implicit (one sparse factorization per
/// (grid, dt), reused across steps and kappa values), the kappa R drift is
/// explicit first-order upwind and CFL-limited.
class FokkerPlanckSolver {
public:
    FokkerPlanckSolver(const ConfigGrid& grid, const PotentialParams& params, double dt);
    ~FokkerPlanckSolver();
    FokkerPlanckSolver(FokkerPlanckSolver&&) noexcept;
    FokkerPlanckSolver& operator=(FokkerPlanckSolver&&) noexcept;

    const ConfigGrid& grid() const { return grid_; }
    const PotentialParams& params() const { return params_; }
    double dt() const { return dt_; }

    /// Advance psi by one step under the given velocity gradient.
    /// Throws on CFL violation or on an output cell below -1e-13.
    PhaseDensity step(const PhaseDensity& psi, const VelocityGradient& kappa) const;

    /// Largest per-face Courant number dt |v.n| / delta for the drift
    /// field v = kappa R; step() refuses values above 1.
    double drift_cfl(const VelocityGradient& kappa) const;

    /// Fixed point of step() at constant kappa: iterates until
    /// ||psi_{n+1} - psi_n||_1 / dt < tol, then normalizes to mass 1.
    /// Starts from psi_inf unless an initial guess is given.
    /// Throws if max_iter steps do not converge.
    PhaseDensity steady_state(const VelocityGradient& kappa, double tol, int max_iter = 2000000,
                              const PhaseDensity* initial = nullptr) const;

private:
    ConfigGrid grid_;
    PotentialParams params_;
    double dt_;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace fene
