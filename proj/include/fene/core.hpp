#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

/// Shared domain types for the FENE dumbbell solver: spring parameters,
/// the equilibrium Maxwellian, and the polar finite-volume grid on the
/// unit disk of admissible elongations.
namespace fene {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

/// FENE spring and fluid parameters. The temperature factor and maximal
/// extension are fixed to 1; only the spring strength k and the fluid
/// viscosity nu vary.
struct PotentialParams {
    double k = 1.0;   ///< spring strength, k > 0
    double beta = 1.0;
    double r0 = 1.0;
    double nu = 1.0;  ///< fluid viscosity, nu > 0

    void validate() const;
};

/// Staggered polar grid tiling the unit disk. Radial cell centers sit at
/// (i+1/2)/nr so no center touches r = 0 or r = 1; angular cells are
/// uniform. Cell areas are exact annulus-sector areas and sum to pi.
class ConfigGrid {
public:
    ConfigGrid(int nr, int ntheta);

    int nr() const { return nr_; }
    int ntheta() const { return ntheta_; }
    int size() const { return nr_ * ntheta_; }
    double dr() const { return dr_; }
    double dtheta() const { return dtheta_; }

    int index(int i, int j) const { return i * ntheta_ + j; }
    double r_center(int i) const { return r_centers_[i]; }
    double r_face(int i) const { return r_faces_[i]; }
    double theta_center(int j) const { return (j + 0.5) * dtheta_; }
    double theta_face(int j) const { return j * dtheta_; }
    double cell_area(int i) const { return ring_areas_[i]; }

    /// Cartesian coordinates of the cell center (i, j).
    Vec2 cell_center(int i, int j) const;

    const std::vector<double>& cell_areas() const { return cell_areas_; }
    const std::vector<double>& r_centers() const { return r_centers_; }

private:
    int nr_;
    int ntheta_;
    double dr_;
    double dtheta_;
    std::vector<double> r_centers_;   // nr values
    std::vector<double> r_faces_;     // nr + 1 values
    std::vector<double> ring_areas_;  // area of one cell per ring
    std::vector<double> cell_areas_;  // per-cell quadrature weights, nr*ntheta
};

/// Nonnegative configuration density sampled at cell centers, with the
/// cached total mass rho = integral of psi over the disk.
struct PhaseDensity {
    std::vector<double> values;
    double mass = 0.0;

    static PhaseDensity from_values(std::vector<double> v, const ConfigGrid& grid);
};

/// FENE potential U(R) = -k log(1 - |R|^2). Requires |R| < 1.
double potential_value(const Vec2& R, const PotentialParams& params);

/// Spring force gradient U'(R) = 2k R / (1 - |R|^2). Requires |R| < 1.
Vec2 potential_gradient(const Vec2& R, const PotentialParams& params);

/// Equilibrium Maxwellian psi_inf(R) = (1 - |R|^2)^k (k+1)/pi, normalized
/// so the exact integral over the disk is 1.
double equilibrium_density(const Vec2& R, const PotentialParams& params);

/// Radius-only form of the Maxwellian, (1 - r^2)^k (k+1)/pi.
double equilibrium_density_radial(double r, const PotentialParams& params);

ConfigGrid build_config_grid(int nr, int ntheta);

/// Per-cell samples of psi_inf on the grid.
std::vector<double> equilibrium_samples(const ConfigGrid& grid, const PotentialParams& params);

/// Midpoint quadrature of per-cell samples against the exact cell areas.
double quadrature(std::span<const double> values, const ConfigGrid& grid);

/// Cell-centered |grad f|^2 of a scalar field on the polar grid: centered
/// differences radially (one-sided at the innermost/outermost rings) and
/// periodic centered differences in theta.
std::vector<double> polar_gradient_sq(std::span<const double> values, const ConfigGrid& grid);

}  // namespace fene
