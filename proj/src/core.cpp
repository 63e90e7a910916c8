#include "fene/core.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fene {

namespace {
constexpr double kPi = std::numbers::pi;

double norm_sq(const Vec2& R) { return R[0] * R[0] + R[1] * R[1]; }
}  // namespace

void PotentialParams::validate() const {
    if (!(k > 0.0)) throw std::invalid_argument("PotentialParams: k must be > 0");
    if (beta != 1.0) throw std::invalid_argument("PotentialParams: beta is fixed to 1");
    if (r0 != 1.0) throw std::invalid_argument("PotentialParams: r0 is fixed to 1");
    if (!(nu > 0.0)) throw std::invalid_argument("PotentialParams: nu must be > 0");
}

ConfigGrid::ConfigGrid(int nr, int ntheta) : nr_(nr), ntheta_(ntheta) {
    if (nr < 4 || ntheta < 4)
        throw std::invalid_argument("ConfigGrid: nr and ntheta must be >= 4");
    dr_ = 1.0 / nr;
    dtheta_ = 2.0 * kPi / ntheta;
    r_faces_.resize(nr + 1);
    for (int i = 0; i <= nr; ++i) r_faces_[i] = static_cast<double>(i) / nr;
    r_centers_.resize(nr);
    ring_areas_.resize(nr);
    for (int i = 0; i < nr; ++i) {
        r_centers_[i] = (i + 0.5) / nr;
        ring_areas_[i] = 0.5 * (r_faces_[i + 1] * r_faces_[i + 1] - r_faces_[i] * r_faces_[i]) * dtheta_;
    }
    cell_areas_.resize(static_cast<size_t>(nr) * ntheta);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < ntheta; ++j) cell_areas_[index(i, j)] = ring_areas_[i];
}

Vec2 ConfigGrid::cell_center(int i, int j) const {
    const double r = r_centers_[i];
    const double th = theta_center(j);
    return {r * std::cos(th), r * std::sin(th)};
}

PhaseDensity PhaseDensity::from_values(std::vector<double> v, const ConfigGrid& grid) {
    PhaseDensity psi;
    psi.values = std::move(v);
    psi.mass = quadrature(psi.values, grid);
    return psi;
}

double potential_value(const Vec2& R, const PotentialParams& params) {
    const double r2 = norm_sq(R);
    if (r2 >= 1.0) throw std::domain_error("potential_value: |R| must be < 1");
    return -params.k * std::log1p(-r2);
}

Vec2 potential_gradient(const Vec2& R, const PotentialParams& params) {
    const double r2 = norm_sq(R);
    if (r2 >= 1.0) throw std::domain_error("potential_gradient: |R| must be < 1");
    const double c = 2.0 * params.k / (1.0 - r2);
    return {c * R[0], c * R[1]};
}

double equilibrium_density_radial(double r, const PotentialParams& params) {
    const double w = 1.0 - r * r;
    if (w <= 0.0) return 0.0;
    return std::pow(w, params.k) * (params.k + 1.0) / kPi;
}

double equilibrium_density(const Vec2& R, const PotentialParams& params) {
    return equilibrium_density_radial(std::sqrt(norm_sq(R)), params);
}

ConfigGrid build_config_grid(int nr, int ntheta) { return ConfigGrid(nr, ntheta); }

std::vector<double> equilibrium_samples(const ConfigGrid& grid, const PotentialParams& params) {
    std::vector<double> v(grid.size());
    for (int i = 0; i < grid.nr(); ++i) {
        const double w = equilibrium_density_radial(grid.r_center(i), params);
        for (int j = 0; j < grid.ntheta(); ++j) v[grid.index(i, j)] = w;
    }
    return v;
}

double quadrature(std::span<const double> values, const ConfigGrid& grid) {
    if (static_cast<int>(values.size()) != grid.size())
        throw std::invalid_argument("quadrature: values length does not match grid");
    double s = 0.0;
    for (int i = 0; i < grid.nr(); ++i) {
        double ring = 0.0;
        for (int j = 0; j < grid.ntheta(); ++j) ring += values[grid.index(i, j)];
        s += ring * grid.cell_area(i);
    }
    return s;
}

std::vector<double> polar_gradient_sq(std::span<const double> values, const ConfigGrid& grid) {
    if (static_cast<int>(values.size()) != grid.size())
        throw std::invalid_argument("polar_gradient_sq: values length does not match grid");
    const int nr = grid.nr(), nt = grid.ntheta();
    std::vector<double> out(grid.size());
    for (int i = 0; i < nr; ++i) {
        const double r = grid.r_center(i);
        for (int j = 0; j < nt; ++j) {
            const int c = grid.index(i, j);
            double dfr;
            if (i == 0)
                dfr = (values[grid.index(1, j)] - values[c]) / grid.dr();
            else if (i == nr - 1)
                dfr = (values[c] - values[grid.index(nr - 2, j)]) / grid.dr();
            else
                dfr = (values[grid.index(i + 1, j)] - values[grid.index(i - 1, j)]) /
                      (2.0 * grid.dr());
            const double dft = (values[grid.index(i, (j + 1) % nt)] -
                                values[grid.index(i, (j + nt - 1) % nt)]) /
                               (2.0 * r * grid.dtheta());
            out[c] = dfr * dfr + dft * dft;
        }
    }
    return out;
}

}  // namespace fene
