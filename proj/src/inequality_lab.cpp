#include "fene/inequality_lab.hpp"

#include <cmath>
#include <stdexcept>

namespace fene {

namespace {

double trapezoid(const std::vector<double>& x, const std::vector<double>& f) {
    double s = 0.0;
    for (size_t i = 0; i + 1 < x.size(); ++i)
        s += 0.5 * (x[i + 1] - x[i]) * (f[i] + f[i + 1]);
    return s;
}

/// Derivative of f with respect to x through the transformed coordinate y,
/// three-point nonuniform centered differences, one-sided at the ends.
std::vector<double> derivative_transformed(const std::vector<double>& x,
                                           const std::vector<double>& f, double k) {
    const size_t n = x.size();
    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i)
        y[i] = (k == 1.0) ? -std::log(x[i]) : std::pow(x[i], 1.0 - k);
    auto dydx = [&](double xi) { return (k == 1.0) ? -1.0 / xi : (1.0 - k) * std::pow(xi, -k); };
    std::vector<double> d(n);
    for (size_t i = 0; i < n; ++i) {
        double dfdy;
        if (i == 0)
            dfdy = (f[1] - f[0]) / (y[1] - y[0]);
        else if (i == n - 1)
            dfdy = (f[n - 1] - f[n - 2]) / (y[n - 1] - y[n - 2]);
        else {
            const double hl = y[i] - y[i - 1], hr = y[i + 1] - y[i];
            dfdy = ((f[i + 1] - f[i]) / hr * hl + (f[i] - f[i - 1]) / hl * hr) / (hl + hr);
        }
        d[i] = dfdy * dydx(x[i]);
    }
    return d;
}

/// Shared RHS core: int x^k |(sqrt(psi/x^k))'|^2 + int psi.
double dissipation_core(const RadialProfile& p, double k, double* mass_out) {
    const size_t n = p.x.size();
    std::vector<double> h(n);
    for (size_t i = 0; i < n; ++i)
        h[i] = std::sqrt(std::max(p.values[i], 0.0) / std::pow(p.x[i], k));
    const std::vector<double> hp = derivative_transformed(p.x, h, k);
    std::vector<double> integrand(n);
    for (size_t i = 0; i < n; ++i) integrand[i] = std::pow(p.x[i], k) * hp[i] * hp[i];
    const double mass = trapezoid(p.x, p.values);
    if (mass_out) *mass_out = mass;
    return trapezoid(p.x, integrand) + mass;
}

std::vector<double> weighted(const RadialProfile& p, double exponent) {
    std::vector<double> f(p.x.size());
    for (size_t i = 0; i < p.x.size(); ++i) f[i] = p.values[i] * std::pow(p.x[i], -exponent);
    return f;
}

}  // namespace

std::vector<double> graded_grid(int n, double x_min) {
    if (n < 8 || !(x_min > 0.0) || !(x_min < 1.0))
        throw std::invalid_argument("graded_grid: need n >= 8 and 0 < x_min < 1");
    std::vector<double> x(n);
    const double L = std::log(x_min);
    for (int i = 0; i < n; ++i) x[i] = std::exp(L * (1.0 - static_cast<double>(i) / (n - 1)));
    x.back() = 1.0;
    return x;
}

void InequalityKind::validate() const {
    if (override_window) return;
    switch (tag) {
        case Tag::hardy1:
            if (!(k > 1.0)) throw std::invalid_argument("hardy1 requires k > 1");
            break;
        case Tag::hardy_inter:
            if (!(k > 0.0)) throw std::invalid_argument("hardy_inter requires k > 0");
            break;
        case Tag::hardy_inter2:
            if (!(-1.0 <= beta && beta < k && k <= 1.0))
                throw std::invalid_argument("hardy_inter2 requires -1 <= beta < k <= 1");
            break;
        case Tag::hardy_inter_log:
            if (!(-1.0 <= beta && beta < k && k <= 1.0))
                throw std::invalid_argument("hardy_inter_log requires -1 <= beta < k <= 1");
            if (!(gamma >= 0.0)) throw std::invalid_argument("hardy_inter_log requires gamma >= 0");
            break;
        case Tag::stress_corollary:
            if (!(k > 0.0)) throw std::invalid_argument("stress_corollary requires k > 0");
            break;
        case Tag::wsi:
            if (!(p > 2.0)) throw std::invalid_argument("wsi requires p > 2");
            break;
    }
}

Sides evaluate_sides(const InequalityKind& kind, const RadialProfile& profile) {
    kind.validate();
    if (profile.x.size() != profile.values.size() || profile.x.size() < 8)
        throw std::invalid_argument("evaluate_sides: malformed profile");
    Sides out;
    double mass = 0.0;
    const double core = dissipation_core(profile, kind.k, &mass);
    switch (kind.tag) {
        case InequalityKind::Tag::hardy1:
            out.lhs = trapezoid(profile.x, weighted(profile, 2.0));
            out.rhs = core;
            break;
        case InequalityKind::Tag::hardy_inter: {
            const double l = trapezoid(profile.x, weighted(profile, 1.0));
            out.lhs = l * l;
            out.rhs = mass * core;
            break;
        }
        case InequalityKind::Tag::hardy_inter2:
            out.lhs = trapezoid(profile.x, weighted(profile, 1.0 + kind.beta));
            out.rhs = std::pow(mass, 0.5 * (1.0 - kind.beta)) *
                      std::pow(core, 0.5 * (1.0 + kind.beta));
            break;
        case InequalityKind::Tag::hardy_inter_log: {
            const size_t n = profile.x.size();
            std::vector<double> lw(n), rw(n);
            const double q = 2.0 * kind.gamma / (1.0 - kind.beta);
            for (size_t i = 0; i < n; ++i) {
                const double lg =
                    std::log(kind.log_shift +
                             profile.values[i] / std::pow(profile.x[i], kind.k));
                lw[i] = profile.values[i] * std::pow(lg, kind.gamma) *
                        std::pow(profile.x[i], -(1.0 + kind.beta));
                rw[i] = profile.values[i] * std::pow(lg, q);
            }
            out.lhs = trapezoid(profile.x, lw);
            out.rhs = std::pow(trapezoid(profile.x, rw), 0.5 * (1.0 - kind.beta)) *
                      std::pow(core, 0.5 * (1.0 + kind.beta));
            break;
        }
        default:
            throw std::invalid_argument(
                "evaluate_sides: use stress_bound_check / wsi_sides for 2D kinds");
    }
    out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
    return out;
}

std::vector<std::function<double(double)>> standard_profile_family(double k) {
    std::vector<std::function<double(double)>> fam;
    for (int i = 0; i < 10; ++i) {
        const double alpha = k / 2.0 + (4.0 * k - k / 2.0) * i / 9.0;
        fam.push_back([alpha](double x) { return std::pow(x, alpha); });
    }
    for (double w : {0.3, 0.1, 0.03, 0.01})
        fam.push_back([k, w](double x) { return std::pow(x, k) * std::exp(-x / w); });
    for (double w : {0.5, 0.1, 0.02, 0.004})
        fam.push_back([k, w](double x) { return std::pow(x, k) * std::exp(-(x * x) / (w * w)); });
    fam.push_back([k](double x) { return std::pow(x, k) * (1.0 + 0.9 * std::cos(6.0 * M_PI * x)); });
    fam.push_back([k](double x) { return std::pow(x, 2.0 * k) * (1.0 + 0.9 * std::sin(12.0 * M_PI * x)); });
    fam.push_back([k](double x) { return std::pow(x, k) * (1.0 + 0.9 * std::sin(3.0 * std::log(x))); });
    fam.push_back([k](double x) { return std::pow(x, 1.5 * k) * (1.0 - x) * (1.0 - x); });
    return fam;
}

ConstantReport empirical_constant(const InequalityKind& kind,
                                  const std::vector<std::function<double(double)>>& family,
                                  int levels, int base_nodes, bool shrink_x_min) {
    if (family.size() < 20)
        throw std::invalid_argument("empirical_constant: family must enumerate >= 20 profiles");
    ConstantReport rep;
    for (int level = 0; level < levels; ++level) {
        const int n = base_nodes << level;
        const double x_min = shrink_x_min ? std::pow(10.0, -3.0 - 3.5 * level) : 1e-8;
        RadialProfile prof;
        prof.x = graded_grid(n, x_min);
        prof.values.resize(prof.x.size());
        double sup = 0.0;
        for (const auto& f : family) {
            for (size_t i = 0; i < prof.x.size(); ++i)
                prof.values[i] = std::max(f(prof.x[i]), 0.0);
            const Sides s = evaluate_sides(kind, prof);
            if (std::isfinite(s.ratio)) sup = std::max(sup, s.ratio);
        }
        rep.grid_sizes.push_back(n);
        rep.x_min.push_back(x_min);
        rep.sup_ratio.push_back(sup);
    }
    for (size_t l = 1; l < rep.sup_ratio.size(); ++l)
        rep.growth_factor.push_back(rep.sup_ratio[l] / rep.sup_ratio[l - 1]);
    if (rep.sup_ratio.size() >= 2) {
        const double a = rep.sup_ratio[rep.sup_ratio.size() - 2];
        const double b = rep.sup_ratio.back();
        rep.relative_change = std::abs(b - a) / std::max(a, 1e-300);
    }
    return rep;
}

Sides wsi_sides(const PhaseDensity& psi, double p, const ConfigGrid& grid,
                const PotentialParams& params) {
    if (!(p > 2.0)) throw std::invalid_argument("wsi_sides: p must be > 2");
    const std::vector<double> winf = equilibrium_samples(grid, params);
    std::vector<double> h(grid.size());
    for (int c = 0; c < grid.size(); ++c)
        h[c] = std::sqrt(std::max(psi.values[c], 0.0) / winf[c]);
    std::vector<double> lp(grid.size());
    for (int c = 0; c < grid.size(); ++c) lp[c] = std::pow(h[c], p) * winf[c];
    const std::vector<double> grad_sq = polar_gradient_sq(h, grid);
    std::vector<double> fisher(grid.size());
    for (int c = 0; c < grid.size(); ++c) fisher[c] = winf[c] * grad_sq[c];
    Sides out;
    out.lhs = std::pow(quadrature(lp, grid), 1.0 / p);
    out.rhs = std::sqrt(quadrature(fisher, grid) + quadrature(psi.values, grid));
    out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
    return out;
}

}  // namespace fene
