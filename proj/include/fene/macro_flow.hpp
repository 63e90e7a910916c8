#pragma once

#include <complex>
#include <string>
#include <vector>

#include "fene/core.hpp"
#include "fene/fokker_planck.hpp"
#include "fene/stress.hpp"

namespace fene {

/// Periodic 2D velocity field on [0,2pi)^2, stored as r2c spectral
/// coefficients (nx rows of ny/2+1 modes per component). Divergence-free
/// after every solver operation.
struct MacroState {
    int nx = 0;
    int ny = 0;
    double time = 0.0;
    std::vector<std::complex<double>> uhat_x;
    std::vector<std::complex<double>> uhat_y;
};

/// Homogeneous-flow driver and regularization knobs for the macro solver.
struct FlowProtocol {
    enum class Kind { steady_shear, planar_extension, time_periodic_shear, coupled };
    Kind kind = Kind::steady_shear;
    double rate = 1.0;   ///< shear rate gamma_dot or extension rate eps_dot
    double omega = 0.0;  ///< angular frequency for time_periodic_shear
    double hyper_strength = 0.0;  ///< 1/n coefficient of (-Laplace)^{2 k_h}; 0 disables
    int hyper_exponent = 1;       ///< k_h
};

FlowProtocol::Kind protocol_kind_from_string(const std::string& s);

/// Trace-free homogeneous velocity gradient of the protocol at time t.
/// Throws for the coupled kind, which has no prescribed gradient.
VelocityGradient protocol_kappa(const FlowProtocol& protocol, double t);

MacroState make_macro_state(int nx, int ny);

/// Taylor-Green field a*(sin x cos y, -cos x sin y).
MacroState taylor_green(int nx, int ny, double amplitude);

/// Physical-space samples of one velocity component at the collocation
/// points x_i = 2pi i/nx (row-major, index ix*ny + iy).
std::vector<double> macro_velocity_x(const MacroState& state);
std::vector<double> macro_velocity_y(const MacroState& state);

/// Trace-corrected spectral velocity gradient at each collocation point.
std::vector<VelocityGradient> velocity_gradient_field(const MacroState& state);

double kinetic_energy(const MacroState& state);            ///< (1/2) integral |u|^2
double velocity_gradient_norm_sq(const MacroState& state); ///< integral |grad u|^2
double max_divergence(const MacroState& state);
double max_speed(const MacroState& state);

/// Spectral amplitude of the mode (kx, ky) of the x component.
double mode_amplitude(const MacroState& state, int kx, int ky);

/// One pseudo-spectral step of the forced Navier-Stokes equation: 2/3-rule
/// dealiased advection, Leray projection, exact integrating factor for the
/// viscous and hyperviscous symbols, forcing from the spectral divergence
/// of the stress field (empty span = unforced). Throws on CFL violation.
MacroState ns_step(const MacroState& state, std::span<const StressTensor> tau_field, double dt,
                   const PotentialParams& params, const FlowProtocol& protocol);

/// One step of the fully coupled micro-macro system: Kramers stress
/// gathered from the configuration densities forces the macro step, the
/// densities are then upwind-advected with the new velocity and stepped in
/// configuration space with the new local velocity gradient. The upwind
/// face velocities come from a streamfunction so the discrete advection is
/// exactly conservative and monotone.
void couple_step(MacroState& macro, std::vector<PhaseDensity>& micro, double dt,
                 const FokkerPlanckSolver& fp, const PotentialParams& params,
                 const FlowProtocol& protocol);

}  // namespace fene
