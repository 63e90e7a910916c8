#pragma once

#include <cstdint>
#include <vector>

#include "fene/core.hpp"
#include "fene/fokker_planck.hpp"
#include "fene/macro_flow.hpp"
#include "fene/stress.hpp"

namespace fene {

/// Brownian-dynamics ensemble of dumbbell configurations in the open unit
/// disk, advanced by Euler-Maruyama with boundary rejection. Every path
/// carries its own splitmix64 stream, so results do not depend on how
/// paths are scheduled.
struct BDEnsemble {
    std::vector<Vec2> paths;
    std::vector<std::uint64_t> rng_state;
    double time = 0.0;
};

struct StressEstimate {
    StressTensor tau;
    StressTensor stderr_;  ///< per-component standard error of the mean
};

struct BDRecord {
    double t = 0.0;
    StressEstimate stress;
};

/// Exact equilibrium sample of M paths from psi_inf by rejection sampling
/// (uniform disk envelope, acceptance (1-r^2)^k).
BDEnsemble bd_init_equilibrium(int M, const PotentialParams& params, std::uint64_t seed);

/// One Euler-Maruyama step R' = R + (kappa R - 2k R/(1-|R|^2)) dt + sqrt(2 dt) xi.
/// Proposals landing outside the disk are retried with a halved dt (same
/// noise) up to 30 times, then with fresh noise; throws with the path index
/// if a path cannot be placed. Deterministic for a fixed seed.
void bd_step(BDEnsemble& ensemble, const VelocityGradient& kappa, double dt,
             const PotentialParams& params);

/// Sample mean and standard error of 2k R_i R_j / (1 - |R|^2) over paths.
StressEstimate estimate_stress(const BDEnsemble& ensemble, const PotentialParams& params);

/// Full oracle run: equilibrium initialization, protocol-driven stepping,
/// stress records every record_dt (and always at t = 0 and t = T).
std::vector<BDRecord> bd_run(const FlowProtocol& protocol, int M, double T, double dt,
                             std::uint64_t seed, const PotentialParams& params,
                             double record_dt);

/// Kolmogorov-Smirnov distance between the empirical radial CDF of the
/// ensemble and a reference CDF F(r).
double radial_ks_distance(const BDEnsemble& ensemble, double (*cdf)(double, double), double k);

}  // namespace fene
