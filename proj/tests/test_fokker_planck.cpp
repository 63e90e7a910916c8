#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fene/core.hpp"
#include "fene/diagnostics.hpp"
#include "fene/fokker_planck.hpp"
#include "fene/stress.hpp"

using namespace fene;

namespace {

PhaseDensity random_positive_density(const ConfigGrid& grid, const PotentialParams& params,
                                     unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(0.2, 1.8);
    std::vector<double> v = equilibrium_samples(grid, params);
    for (double& x : v) x *= unif(rng);
    return PhaseDensity::from_values(v, grid);
}

double l1_distance(const PhaseDensity& a, const PhaseDensity& b, const ConfigGrid& grid) {
    std::vector<double> d(a.values.size());
    for (size_t i = 0; i < d.size(); ++i) d[i] = std::abs(a.values[i] - b.values[i]);
    return quadrature(d, grid);
}

}  // namespace

TEST_CASE("velocity gradient invariants") {
    VelocityGradient kap;
    CHECK_NOTHROW(kap.validate());
    CHECK(kap.is_zero());

    kap.kappa = {{{0.0, 1.0}, {0.0, 0.0}}};
    CHECK_NOTHROW(kap.validate());
    CHECK_FALSE(kap.is_zero());

    kap.kappa = {{{0.5, 0.0}, {0.0, -0.5}}};
    CHECK_NOTHROW(kap.validate());

    kap.kappa = {{{0.5, 0.0}, {0.0, -0.4}}};
    CHECK_THROWS_AS(kap.validate(), std::invalid_argument);
}

TEST_CASE("equilibrium is a fixed point of the step") {
    PotentialParams params;
    const ConfigGrid grid = build_config_grid(32, 32);
    const FokkerPlanckSolver fp(grid, params, 1e-3);
    const PhaseDensity psi = PhaseDensity::from_values(equilibrium_samples(grid, params), grid);
    const PhaseDensity out = fp.step(psi, VelocityGradient{});
    for (size_t i = 0; i < psi.values.size(); ++i)
        CHECK(std::abs(out.values[i] - psi.values[i]) <= 1e-12 * psi.values[i] + 1e-15);
}

TEST_CASE("mass conservation under random trace-free drifts") {
    PotentialParams params;
    params.k = 1.5;
    const ConfigGrid grid = build_config_grid(24, 24);
    const FokkerPlanckSolver fp(grid, params, 1e-3);
    PhaseDensity psi = random_positive_density(grid, params, 19);
    const double mass0 = psi.mass;
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int n = 0; n < 300; ++n) {
        VelocityGradient kap;
        const double a = unif(rng), b = unif(rng), c = unif(rng);
        kap.kappa = {{{a, b}, {c, -a}}};
        psi = fp.step(psi, kap);
        CHECK(std::abs(psi.mass - mass0) <= 1e-12 * mass0);
    }
}

TEST_CASE("positivity and discrete H-theorem at kappa = 0") {
    PotentialParams params;
    const ConfigGrid grid = build_config_grid(32, 32);
    const FokkerPlanckSolver fp(grid, params, 1e-3);
    PhaseDensity psi = random_positive_density(grid, params, 99);
    double prev = relative_entropy(psi, grid, params, psi.mass);
    for (int n = 0; n < 100; ++n) {
        psi = fp.step(psi, VelocityGradient{});
        for (double v : psi.values) CHECK(v >= -1e-13);
        const double ent = relative_entropy(psi, grid, params, psi.mass);
        CHECK(ent <= prev + 1e-15);
        prev = ent;
    }
    // and the long-run limit is psi_inf
    for (int n = 0; n < 4900; ++n) psi = fp.step(psi, VelocityGradient{});
    const PhaseDensity eq = PhaseDensity::from_values(equilibrium_samples(grid, params), grid);
    CHECK(l1_distance(psi, eq, grid) / psi.mass < 2e-2);
}

TEST_CASE("drift CFL accounting") {
    PotentialParams params;
    const ConfigGrid grid = build_config_grid(32, 32);
    const FokkerPlanckSolver fp(grid, params, 1e-3);
    CHECK(fp.drift_cfl(VelocityGradient{}) == 0.0);

    VelocityGradient shear;
    shear.kappa = {{{0.0, 1.0}, {0.0, 0.0}}};
    const double c1 = fp.drift_cfl(shear);
    CHECK(c1 > 0.0);

    VelocityGradient shear2;
    shear2.kappa = {{{0.0, 2.0}, {0.0, 0.0}}};
    CHECK(fp.drift_cfl(shear2) == doctest::Approx(2.0 * c1).epsilon(1e-13));

    // a rate large enough to break the bound makes step refuse
    VelocityGradient wild;
    const double rate = 1.5 / c1;
    wild.kappa = {{{0.0, rate}, {0.0, 0.0}}};
    CHECK(fp.drift_cfl(wild) > 1.0);
    const PhaseDensity psi = PhaseDensity::from_values(equilibrium_samples(grid, params), grid);
    CHECK_THROWS_AS(fp.step(psi, wild), std::invalid_argument);
}

TEST_CASE("steady state at kappa = 0 recovers the equilibrium") {
    PotentialParams params;
    const ConfigGrid grid = build_config_grid(24, 24);
    const FokkerPlanckSolver fp(grid, params, 2e-3);
    const PhaseDensity ss = fp.steady_state(VelocityGradient{}, 1e-9);
    CHECK(ss.mass == doctest::Approx(1.0).epsilon(1e-12));
    // the discrete steady state is the psi_inf samples normalized to mass 1
    std::vector<double> v = equilibrium_samples(grid, params);
    PhaseDensity eq = PhaseDensity::from_values(v, grid);
    for (double& x : v) x /= eq.mass;
    eq = PhaseDensity::from_values(v, grid);
    CHECK(l1_distance(ss, eq, grid) < 1e-8);
}

TEST_CASE("weak extension sets the sign of the normal stress difference") {
    PotentialParams params;
    const ConfigGrid grid = build_config_grid(24, 24);
    const FokkerPlanckSolver fp(grid, params, 2e-3);
    for (double eps : {0.1, -0.1}) {
        VelocityGradient ext;
        ext.kappa = {{{eps, 0.0}, {0.0, -eps}}};
        const PhaseDensity ss = fp.steady_state(ext, 1e-9);
        const StressTensor tau = kramers_stress(ss, grid, params);
        CHECK((tau.xx - tau.yy) * eps > 0.0);
    }
}

TEST_CASE("steady state is independent of the initial guess") {
    PotentialParams params;
    const ConfigGrid grid = build_config_grid(16, 16);
    const FokkerPlanckSolver fp(grid, params, 2e-3);
    VelocityGradient shear;
    shear.kappa = {{{0.0, 0.5}, {0.0, 0.0}}};
    const double tol = 1e-9;
    const PhaseDensity g1 = random_positive_density(grid, params, 5);
    const PhaseDensity g2 = random_positive_density(grid, params, 6);
    const PhaseDensity s1 = fp.steady_state(shear, tol, 2000000, &g1);
    const PhaseDensity s2 = fp.steady_state(shear, tol, 2000000, &g2);
    CHECK(l1_distance(s1, s2, grid) <= 2.0 * tol);
}

TEST_CASE("rotation of the initial data commutes with the kappa = 0 step") {
    PotentialParams params;
    const ConfigGrid grid = build_config_grid(16, 16);
    const FokkerPlanckSolver fp(grid, params, 1e-3);
    PhaseDensity psi = random_positive_density(grid, params, 77);

    // a quarter turn is an index shift on this grid, so commutation is exact
    const int shift = grid.ntheta() / 4;
    auto rotate = [&](const PhaseDensity& in) {
        std::vector<double> v(in.values.size());
        for (int i = 0; i < grid.nr(); ++i)
            for (int j = 0; j < grid.ntheta(); ++j)
                v[grid.index(i, (j + shift) % grid.ntheta())] = in.values[grid.index(i, j)];
        return PhaseDensity::from_values(v, grid);
    };

    PhaseDensity a = fp.step(rotate(psi), VelocityGradient{});
    PhaseDensity b = rotate(fp.step(psi, VelocityGradient{}));
    for (size_t i = 0; i < a.values.size(); ++i)
        CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-11));
}

TEST_CASE("zero-mass input passes through as zero") {
    PotentialParams params;
    const ConfigGrid grid = build_config_grid(16, 16);
    const FokkerPlanckSolver fp(grid, params, 1e-3);
    const PhaseDensity zero = PhaseDensity::from_values(std::vector<double>(grid.size(), 0.0), grid);
    const PhaseDensity out = fp.step(zero, VelocityGradient{});
    for (double v : out.values) CHECK(std::abs(v) <= 1e-15);
}
