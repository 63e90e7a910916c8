#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fene/core.hpp"

namespace fene {

/// 1D radial profile psi(x) on a graded grid over (0,1), x = 1 - |R| the
/// distance to the boundary of the configuration disk.
struct RadialProfile {
    std::vector<double> x;       ///< strictly increasing nodes in (0,1)
    std::vector<double> values;  ///< psi samples, >= 0
};

/// Geometric grid of n nodes from x_min to 1, refined toward x = 0.
std::vector<double> graded_grid(int n, double x_min);

/// Which functional inequality to evaluate, with its parameters.
struct InequalityKind {
    enum class Tag { hardy1, hardy_inter, hardy_inter2, hardy_inter_log, stress_corollary, wsi };
    Tag tag = Tag::hardy_inter;
    double k = 1.0;
    double beta = 0.0;     // hardy_inter2 / hardy_inter_log
    double gamma = 0.0;    // hardy_inter_log
    double p = 2.5;        // wsi
    double log_shift = std::exp(1.0);  ///< the constant inside log(C + psi/x^k)
    bool override_window = false;      ///< evaluate outside the validity window

    /// Throws unless the parameters sit in the validity window (or the
    /// override flag is set).
    void validate() const;
};

struct Sides {
    double lhs = 0.0;
    double rhs = 0.0;  ///< without the inequality's constant
    double ratio = 0.0;
};

/// Both sides of a Hardy-type inequality on a 1D profile. The derivative of
/// sqrt(psi/x^k) is taken by centered differences in the transformed
/// coordinate (y = -log x for k = 1, y = x^{1-k} otherwise).
Sides evaluate_sides(const InequalityKind& kind, const RadialProfile& profile);

/// Standard profile family for constant sweeps: monomials x^alpha with
/// alpha in [k/2, 4k], boundary-concentrating bumps, and oscillatory
/// modulations. At least 20 profiles.
std::vector<std::function<double(double)>> standard_profile_family(double k);

struct ConstantReport {
    std::vector<int> grid_sizes;
    std::vector<double> x_min;            ///< innermost node per level
    std::vector<double> sup_ratio;        ///< per refinement level
    double relative_change = 0.0;         ///< between the two finest levels
    std::vector<double> growth_factor;    ///< sup ratio between consecutive levels
};

/// Empirical constant sweep: sup of lhs/rhs over the family at each of the
/// refinement levels. When shrink_x_min is set the innermost node shrinks
/// with the level (10^{-3 - 3.5 l}); that schedule exposes divergence for
/// out-of-window parameters. Otherwise the innermost node stays at 1e-8 and
/// only the node count doubles.
ConstantReport empirical_constant(const InequalityKind& kind,
                                  const std::vector<std::function<double(double)>>& family,
                                  int levels = 4, int base_nodes = 200,
                                  bool shrink_x_min = false);

/// Both sides of the weighted Sobolev inequality on the 2D disk grid:
/// (int |sqrt(psi/psi_inf)|^p psi_inf)^{1/p} vs
/// (int |grad sqrt(psi/psi_inf)|^2 psi_inf + psi)^{1/2}.
Sides wsi_sides(const PhaseDensity& psi, double p, const ConfigGrid& grid,
                const PotentialParams& params);

}  // namespace fene
