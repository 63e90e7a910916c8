#include "fene/fokker_planck.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>

namespace fene {

void VelocityGradient::validate() const {
    const double tr = kappa[0][0] + kappa[1][1];
    if (std::abs(tr) > 1e-14)
        throw std::invalid_argument("VelocityGradient: trace must vanish (div u = 0)");
}

bool VelocityGradient::is_zero() const {
    return kappa[0][0] == 0.0 && kappa[0][1] == 0.0 && kappa[1][0] == 0.0 && kappa[1][1] == 0.0;
}

struct FokkerPlanckSolver::Impl {
    Eigen::SparseMatrix<double> system;  // I - dt * D
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    std::vector<double> psi_inf;  // per ring
};

namespace {

// v.n for the drift field v = kappa R at a point given in polar form.
double drift_normal(const Mat2& k, double r, double cth, double sth, bool radial) {
    const double Rx = r * cth, Ry = r * sth;
    const double vx = k[0][0] * Rx + k[0][1] * Ry;
    const double vy = k[1][0] * Rx + k[1][1] * Ry;
    if (radial) return vx * cth + vy * sth;   // n = e_r
    return -vx * sth + vy * cth;              // n = e_theta
}

}  // namespace

FokkerPlanckSolver::FokkerPlanckSolver(const ConfigGrid& grid, const PotentialParams& params,
                                       double dt)
    : grid_(grid), params_(params), dt_(dt), impl_(std::make_unique<Impl>()) {
    params_.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("FokkerPlanckSolver: dt must be > 0");

    const int nr = grid_.nr(), nt = grid_.ntheta(), n = grid_.size();
    impl_->psi_inf.resize(nr);
    for (int i = 0; i < nr; ++i)
        impl_->psi_inf[i] = equilibrium_density_radial(grid_.r_center(i), params_);

    // Weighted diffusion: A_c dpsi_c/dt = sum_f w_f (g_n - g_c), g = psi/psi_inf,
    // w_f = psi_inf(face) * ds / delta. Outer boundary faces are omitted, so the
    // total flux through r = 1 is zero by construction.
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(n) * 5);
    std::vector<double> diag(n, 1.0);
    auto couple = [&](int c, int nb, int ring_c, int ring_nb, double w) {
        const double ac = grid_.cell_area(ring_c);
        diag[c] += dt_ * w / (ac * impl_->psi_inf[ring_c]);
        trip.emplace_back(c, nb, -dt_ * w / (ac * impl_->psi_inf[ring_nb]));
    };
    for (int i = 1; i < nr; ++i) {
        const double rf = grid_.r_face(i);
        const double wface = std::sqrt(impl_->psi_inf[i - 1] * impl_->psi_inf[i]);
        const double w = wface * rf * grid_.dtheta() / grid_.dr();
        for (int j = 0; j < nt; ++j) {
            const int lo = grid_.index(i - 1, j), hi = grid_.index(i, j);
            couple(lo, hi, i - 1, i, w);
            couple(hi, lo, i, i - 1, w);
        }
    }
    for (int i = 0; i < nr; ++i) {
        const double rc = grid_.r_center(i);
        const double w = impl_->psi_inf[i] * grid_.dr() / (rc * grid_.dtheta());
        for (int j = 0; j < nt; ++j) {
            const int a = grid_.index(i, j), b = grid_.index(i, (j + 1) % nt);
            couple(a, b, i, i, w);
            couple(b, a, i, i, w);
        }
    }
    for (int c = 0; c < n; ++c) trip.emplace_back(c, c, diag[c]);

    impl_->system.resize(n, n);
    impl_->system.setFromTriplets(trip.begin(), trip.end());
    impl_->lu.compute(impl_->system);
    if (impl_->lu.info() != Eigen::Success)
        throw std::runtime_error("FokkerPlanckSolver: sparse factorization failed");
}

FokkerPlanckSolver::~FokkerPlanckSolver() = default;
FokkerPlanckSolver::FokkerPlanckSolver(FokkerPlanckSolver&&) noexcept = default;
FokkerPlanckSolver& FokkerPlanckSolver::operator=(FokkerPlanckSolver&&) noexcept = default;

double FokkerPlanckSolver::drift_cfl(const VelocityGradient& kappa) const {
    if (kappa.is_zero()) return 0.0;
    const int nr = grid_.nr(), nt = grid_.ntheta();
    double worst = 0.0;
    for (int i = 1; i < nr; ++i) {
        const double rf = grid_.r_face(i);
        for (int j = 0; j < nt; ++j) {
            const double th = grid_.theta_center(j);
            const double vn = drift_normal(kappa.kappa, rf, std::cos(th), std::sin(th), true);
            worst = std::max(worst, std::abs(vn) / grid_.dr());
        }
    }
    for (int i = 0; i < nr; ++i) {
        const double rc = grid_.r_center(i);
        for (int j = 0; j < nt; ++j) {
            const double th = grid_.theta_face(j);
            const double vn = drift_normal(kappa.kappa, rc, std::cos(th), std::sin(th), false);
            worst = std::max(worst, std::abs(vn) / (rc * grid_.dtheta()));
        }
    }
    return dt_ * worst;
}

PhaseDensity FokkerPlanckSolver::step(const PhaseDensity& psi, const VelocityGradient& kappa) const {
    const int nr = grid_.nr(), nt = grid_.ntheta(), n = grid_.size();
    if (static_cast<int>(psi.values.size()) != n)
        throw std::invalid_argument("FokkerPlanckSolver::step: psi does not match grid");
    kappa.validate();

    Eigen::VectorXd rhs(n);
    for (int c = 0; c < n; ++c) rhs[c] = psi.values[c];

    if (!kappa.is_zero()) {
        if (drift_cfl(kappa) > 1.0)
            throw std::invalid_argument("FokkerPlanckSolver::step: drift CFL violated");
        // Explicit upwind drift fluxes; telescoping across interior faces keeps
        // the total mass exact.
        auto add_flux = [&](int up, int dn, int ring_up, int ring_dn, double vn, double ds) {
            const double phi = dt_ * ds * (vn > 0.0 ? vn * psi.values[up] : vn * psi.values[dn]);
            rhs[up] -= phi / grid_.cell_area(ring_up);
            rhs[dn] += phi / grid_.cell_area(ring_dn);
        };
        for (int i = 1; i < nr; ++i) {
            const double rf = grid_.r_face(i);
            const double ds = rf * grid_.dtheta();
            for (int j = 0; j < nt; ++j) {
                const double th = grid_.theta_center(j);
                const double vn = drift_normal(kappa.kappa, rf, std::cos(th), std::sin(th), true);
                add_flux(grid_.index(i - 1, j), grid_.index(i, j), i - 1, i, vn, ds);
            }
        }
        for (int i = 0; i < nr; ++i) {
            const double rc = grid_.r_center(i);
            for (int j = 0; j < nt; ++j) {
                const double thf = grid_.theta_face((j + 1) % nt);
                const double vn =
                    drift_normal(kappa.kappa, rc, std::cos(thf), std::sin(thf), false);
                add_flux(grid_.index(i, j), grid_.index(i, (j + 1) % nt), i, i, vn, grid_.dr());
            }
        }
    }

    Eigen::VectorXd out = impl_->lu.solve(rhs);

    PhaseDensity next;
    next.values.resize(n);
    double scale = 0.0;
    for (int c = 0; c < n; ++c) scale = std::max(scale, std::abs(psi.values[c]));
    const double floor = -1e-13 * std::max(1.0, scale);
    for (int c = 0; c < n; ++c) {
        if (out[c] < floor)
            throw std::runtime_error("FokkerPlanckSolver::step: negative density, scheme violation");
        next.values[c] = out[c];
    }
    // Conservative fix-up: the update is conservative in exact arithmetic,
    // so the residual mass defect is pure solve/flux roundoff; rescaling to
    // the incoming mass keeps it from accumulating over long runs.
    const double raw_mass = quadrature(next.values, grid_);
    if (raw_mass > 0.0 && psi.mass > 0.0) {
        const double fix = psi.mass / raw_mass;
        for (double& v : next.values) v *= fix;
    }
    next.mass = quadrature(next.values, grid_);
    return next;
}

PhaseDensity FokkerPlanckSolver::steady_state(const VelocityGradient& kappa, double tol,
                                              int max_iter, const PhaseDensity* initial) const {
    if (!(tol > 0.0)) throw std::invalid_argument("steady_state: tol must be > 0");
    PhaseDensity psi =
        initial ? *initial
                : PhaseDensity::from_values(equilibrium_samples(grid_, params_), grid_);
    for (int it = 0; it < max_iter; ++it) {
        PhaseDensity next = step(psi, kappa);
        double diff = 0.0;
        for (int c = 0; c < grid_.size(); ++c)
            diff += std::abs(next.values[c] - psi.values[c]) * grid_.cell_areas()[c];
        psi = std::move(next);
        if (diff / dt_ < tol) {
            for (double& v : psi.values) v /= psi.mass;
            psi.mass = quadrature(psi.values, grid_);
            return psi;
        }
    }
    throw std::runtime_error("steady_state: no convergence within max_iter steps");
}

}  // namespace fene
