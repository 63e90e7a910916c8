#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "fene/core.hpp"
#include "fene/inequality_lab.hpp"

using namespace fene;

namespace {

RadialProfile sample(const std::vector<double>& x, const std::function<double(double)>& f) {
    RadialProfile p;
    p.x = x;
    p.values.reserve(x.size());
    for (double xi : x) p.values.push_back(f(xi));
    return p;
}

}  // namespace

TEST_CASE("graded grid shape") {
    const std::vector<double> x = graded_grid(100, 1e-6);
    REQUIRE(x.size() == 100);
    CHECK(x.front() == doctest::Approx(1e-6).epsilon(1e-12));
    CHECK(x.back() == 1.0);
    for (size_t i = 1; i < x.size(); ++i) CHECK(x[i] > x[i - 1]);
    // geometric: constant ratio
    const double q = x[1] / x[0];
    for (size_t i = 2; i < x.size(); ++i) CHECK(x[i] / x[i - 1] == doctest::Approx(q).epsilon(1e-9));
}

TEST_CASE("validity windows are enforced") {
    InequalityKind kind;
    kind.tag = InequalityKind::Tag::hardy1;
    kind.k = 0.9;
    CHECK_THROWS_AS(kind.validate(), std::invalid_argument);
    kind.override_window = true;
    CHECK_NOTHROW(kind.validate());
    kind.override_window = false;
    kind.k = 1.5;
    CHECK_NOTHROW(kind.validate());

    kind.tag = InequalityKind::Tag::hardy_inter;
    kind.k = -0.1;
    CHECK_THROWS_AS(kind.validate(), std::invalid_argument);
    kind.k = 1.0;
    CHECK_NOTHROW(kind.validate());

    kind.tag = InequalityKind::Tag::hardy_inter2;
    kind.k = 1.0;
    kind.beta = 1.0;  // needs beta < k
    CHECK_THROWS_AS(kind.validate(), std::invalid_argument);
    kind.beta = -1.5;  // needs beta >= -1
    CHECK_THROWS_AS(kind.validate(), std::invalid_argument);
    kind.beta = 0.5;
    CHECK_NOTHROW(kind.validate());

    kind.tag = InequalityKind::Tag::hardy_inter_log;
    kind.gamma = -0.5;
    CHECK_THROWS_AS(kind.validate(), std::invalid_argument);
    kind.gamma = 1.0;
    CHECK_NOTHROW(kind.validate());

    kind.tag = InequalityKind::Tag::wsi;
    kind.p = 2.0;  // needs p > 2
    CHECK_THROWS_AS(kind.validate(), std::invalid_argument);
    kind.p = 2.5;
    CHECK_NOTHROW(kind.validate());
}

TEST_CASE("hardy_inter closed form: psi = x^k") {
    // LHS = (int x^{k-1})^2 = 1/k^2, RHS = (int x^k)^2 = 1/(k+1)^2,
    // ratio ((k+1)/k)^2; equals 4 at k = 1.
    for (double k : {1.0, 0.5, 0.8}) {
        InequalityKind kind;
        kind.tag = InequalityKind::Tag::hardy_inter;
        kind.k = k;
        const std::vector<double> x = graded_grid(4000, 1e-10);
        const Sides s = evaluate_sides(kind, sample(x, [k](double t) { return std::pow(t, k); }));
        const double expected = (k + 1.0) * (k + 1.0) / (k * k);
        CHECK(s.ratio == doctest::Approx(expected).epsilon(2e-3));
    }
}

TEST_CASE("hardy1 closed form: psi = x^4, k = 2") {
    InequalityKind kind;
    kind.tag = InequalityKind::Tag::hardy1;
    kind.k = 2.0;
    const std::vector<double> x = graded_grid(4000, 1e-10);
    const Sides s = evaluate_sides(kind, sample(x, [](double t) { return t * t * t * t; }));
    CHECK(s.lhs == doctest::Approx(1.0 / 3.0).epsilon(2e-3));
    CHECK(s.rhs == doctest::Approx(8.0 / 15.0).epsilon(2e-3));
    CHECK(s.ratio == doctest::Approx(5.0 / 8.0).epsilon(4e-3));
}

TEST_CASE("zero profile gives zero sides") {
    InequalityKind kind;
    kind.tag = InequalityKind::Tag::hardy_inter;
    const std::vector<double> x = graded_grid(500, 1e-8);
    const Sides s = evaluate_sides(kind, sample(x, [](double) { return 0.0; }));
    CHECK(s.lhs == 0.0);
    CHECK(s.rhs == 0.0);
    CHECK(s.ratio == 0.0);
}

TEST_CASE("scale invariance of the ratios") {
    const std::vector<double> x = graded_grid(2000, 1e-8);
    auto base = [](double t) { return std::pow(t, 1.3) * std::exp(-t / 0.2); };
    for (auto tag : {InequalityKind::Tag::hardy_inter, InequalityKind::Tag::hardy1,
                     InequalityKind::Tag::hardy_inter2}) {
        InequalityKind kind;
        kind.tag = tag;
        kind.k = tag == InequalityKind::Tag::hardy1 ? 1.5 : 1.0;
        kind.beta = 0.5;
        const double r1 = evaluate_sides(kind, sample(x, base)).ratio;
        for (double c : {0.1, 10.0}) {
            const double rc =
                evaluate_sides(kind, sample(x, [&](double t) { return c * base(t); })).ratio;
            CHECK(rc == doctest::Approx(r1).epsilon(1e-9));
        }
    }
}

TEST_CASE("evaluate_sides converges at order >= 2 on a smooth profile") {
    InequalityKind kind;
    kind.tag = InequalityKind::Tag::hardy_inter;
    kind.k = 1.0;
    auto f = [](double t) { return t * std::exp(-t); };
    // reference at very high resolution
    const Sides ref = evaluate_sides(kind, sample(graded_grid(200000, 1e-8), f));
    std::vector<double> errs;
    for (int n : {500, 1000, 2000}) {
        const Sides s = evaluate_sides(kind, sample(graded_grid(n, 1e-8), f));
        errs.push_back(std::abs(s.ratio - ref.ratio));
    }
    CHECK(std::log2(errs[0] / errs[1]) >= 1.8);
    CHECK(std::log2(errs[1] / errs[2]) >= 1.8);
}

TEST_CASE("standard profile family size and positivity") {
    const auto family = standard_profile_family(1.0);
    CHECK(family.size() >= 20);
    const std::vector<double> x = graded_grid(200, 1e-8);
    for (const auto& f : family)
        for (double xi : x) CHECK(f(xi) >= 0.0);
}

TEST_CASE("hardy_inter empirical constant is stable at k = 1") {
    InequalityKind kind;
    kind.tag = InequalityKind::Tag::hardy_inter;
    kind.k = 1.0;
    const ConstantReport rep = empirical_constant(kind, standard_profile_family(1.0));
    REQUIRE(rep.sup_ratio.size() >= 2);
    for (double s : rep.sup_ratio) CHECK(std::isfinite(s));
    CHECK(rep.relative_change < 0.05);
    CHECK(rep.sup_ratio.back() >= 4.0 - 5e-3);  // the x^k member already achieves 4
}

TEST_CASE("hardy1 stays bounded inside its window and diverges at k = 0.9") {
    InequalityKind in;
    in.tag = InequalityKind::Tag::hardy1;
    in.k = 1.5;
    const ConstantReport stable = empirical_constant(in, standard_profile_family(1.5));
    CHECK(stable.relative_change < 0.05);

    InequalityKind out;
    out.tag = InequalityKind::Tag::hardy1;
    out.k = 0.9;
    out.override_window = true;
    const ConstantReport div =
        empirical_constant(out, standard_profile_family(0.9), 4, 200, /*shrink_x_min=*/true);
    REQUIRE(div.growth_factor.size() >= 3);
    for (double g : div.growth_factor) CHECK(g > 2.0);
}

TEST_CASE("wsi equals one on equilibria and is stable on perturbations") {
    PotentialParams params;
    const ConfigGrid grid = build_config_grid(64, 64);
    std::vector<double> v = equilibrium_samples(grid, params);
    const PhaseDensity eq = PhaseDensity::from_values(v, grid);
    for (double p : {2.1, 2.5, 3.0}) {
        const Sides s = wsi_sides(eq, p, grid, params);
        CHECK(s.lhs == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(s.rhs == doctest::Approx(1.0).epsilon(1e-3));
    }

    // c psi_inf: both sides sqrt(c)
    for (double& x : v) x *= 4.0;
    const Sides s4 = wsi_sides(PhaseDensity::from_values(v, grid), 2.5, grid, params);
    CHECK(s4.lhs == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(s4.rhs == doctest::Approx(2.0).epsilon(1e-3));

    // perturbed state: ratio below 1 and refinement-stable
    std::vector<double> ratios;
    for (int n : {32, 64, 128}) {
        const ConfigGrid g = build_config_grid(n, n);
        std::vector<double> w = equilibrium_samples(g, params);
        for (int i = 0; i < g.nr(); ++i)
            for (int j = 0; j < g.ntheta(); ++j)
                w[g.index(i, j)] *= 1.0 + 0.5 * std::cos(g.theta_center(j));
        ratios.push_back(wsi_sides(PhaseDensity::from_values(w, g), 2.5, g, params).ratio);
    }
    CHECK(std::abs(ratios[2] - ratios[1]) / ratios[2] < 0.05);
    for (double r : ratios) CHECK(r <= 1.05);
}
