#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fene/cli_io.hpp"
#include "fene/diagnostics.hpp"
#include "fene/fokker_planck.hpp"
#include "fene/inequality_lab.hpp"
#include "fene/macro_flow.hpp"
#include "fene/stochastic_oracle.hpp"
#include "fene/stress.hpp"

namespace {

using namespace fene;

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

PhaseDensity initial_density(const ConfigGrid& grid, const PotentialParams& params,
                             double tilt) {
    std::vector<double> v = equilibrium_samples(grid, params);
    if (tilt != 0.0)
        for (int i = 0; i < grid.nr(); ++i)
            for (int j = 0; j < grid.ntheta(); ++j)
                v[grid.index(i, j)] *= 1.0 + tilt * std::cos(grid.theta_center(j));
    PhaseDensity psi = PhaseDensity::from_values(std::move(v), grid);
    for (double& x : psi.values) x /= psi.mass;
    psi.mass = quadrature(psi.values, grid);
    return psi;
}

int run_diagnose(const RunSpec& spec) {
    const PotentialParams params{spec.k, 1.0, 1.0, spec.nu};
    const ConfigGrid grid = build_config_grid(spec.nr, spec.ntheta);
    FokkerPlanckSolver fp(grid, params, spec.dt);
    FlowProtocol protocol;
    protocol.kind = protocol_kind_from_string(spec.protocol);
    protocol.rate = spec.rate;
    protocol.omega = spec.omega;
    if (protocol.kind == FlowProtocol::Kind::coupled)
        throw std::invalid_argument("diagnose mode needs a homogeneous protocol");
    if (!shift_constant_admissible(spec.a))
        throw std::invalid_argument("shift constant a is not large enough");

    PhaseDensity psi = initial_density(grid, params, spec.init_perturbation);
    DiagnosticsLedger ledger;
    const long nsteps = std::lround(spec.T / spec.dt);
    const long cadence =
        spec.record_every > 0.0 ? std::max(1L, std::lround(spec.record_every / spec.dt)) : 1L;
    double f_prev = free_energy_homogeneous(psi, grid, params);
    auto record = [&](double t, const PhaseDensity& p, double residual) {
        LedgerRow row;
        row.t = t;
        row.rel_entropy = relative_entropy(p, grid, params, 1.0);
        row.free_energy = free_energy_homogeneous(p, grid, params);
        row.diss_psi = entropy_dissipation(p, grid, params);
        row.n1 = n1_norm(p, spec.a, grid, params);
        row.n2 = n2_norm(p, spec.a, grid, params);
        row.residual = residual;
        ledger.rows.push_back(row);
    };
    record(0.0, psi, 0.0);
    for (long n = 0; n < nsteps; ++n) {
        const VelocityGradient kappa = protocol_kappa(protocol, n * spec.dt);
        psi = fp.step(psi, kappa);
        const double t = (n + 1) * spec.dt;
        const double f = free_energy_homogeneous(psi, grid, params);
        const StressTensor tau = kramers_stress(psi, grid, params);
        const Mat2& kp = kappa.kappa;
        const double work = kp[0][0] * tau.xx + (kp[0][1] + kp[1][0]) * tau.xy + kp[1][1] * tau.yy;
        const double res = balance_residual(f_prev, f, spec.dt, 0.0,
                                            entropy_dissipation(psi, grid, params), work);
        f_prev = f;
        if ((n + 1) % cadence == 0 || n == nsteps - 1) record(t, psi, res);
    }
    write_timeseries(ledger, spec.out_path.empty() ? "diagnose.csv" : spec.out_path);
    return 0;
}

int run_simulate(const RunSpec& spec) {
    const PotentialParams params{spec.k, 1.0, 1.0, spec.nu};
    const ConfigGrid grid = build_config_grid(spec.nr, spec.ntheta);
    FokkerPlanckSolver fp(grid, params, spec.dt);
    FlowProtocol protocol;
    protocol.kind = FlowProtocol::Kind::coupled;
    protocol.hyper_strength = spec.hyper_strength;
    protocol.hyper_exponent = spec.hyper_exponent;

    MacroState macro = taylor_green(spec.nx, spec.ny, spec.u0_amplitude);
    std::vector<PhaseDensity> micro(static_cast<size_t>(spec.nx) * spec.ny,
                                    initial_density(grid, params, spec.init_perturbation));
    DiagnosticsLedger ledger;
    const long nsteps = std::lround(spec.T / spec.dt);
    const long cadence =
        spec.record_every > 0.0 ? std::max(1L, std::lround(spec.record_every / spec.dt)) : 1L;
    const double cell = (2.0 * M_PI / spec.nx) * (2.0 * M_PI / spec.ny);
    auto diss_psi_total = [&]() {
        double s = 0.0;
        for (const PhaseDensity& p : micro) s += cell * entropy_dissipation(p, grid, params);
        return s;
    };
    auto record = [&](double t, double residual) {
        LedgerRow row;
        row.t = t;
        row.kinetic = kinetic_energy(macro);
        row.free_energy = free_energy(micro, macro, grid, params);
        row.rel_entropy = row.free_energy - row.kinetic;
        row.diss_u = params.nu * velocity_gradient_norm_sq(macro);
        row.diss_psi = diss_psi_total();
        double n1 = 0.0, n2 = 0.0;
        for (const PhaseDensity& p : micro) {
            n1 += cell * n1_norm(p, spec.a, grid, params);
            n2 += cell * n2_norm(p, spec.a, grid, params);
        }
        row.n1 = n1;
        row.n2 = n2;
        row.residual = residual;
        ledger.rows.push_back(row);
    };
    record(0.0, 0.0);
    double f_prev = free_energy(micro, macro, grid, params);
    for (long n = 0; n < nsteps; ++n) {
        couple_step(macro, micro, spec.dt, fp, params, protocol);
        const double f = free_energy(micro, macro, grid, params);
        const double res =
            balance_residual(f_prev, f, spec.dt, params.nu * velocity_gradient_norm_sq(macro),
                             diss_psi_total(), 0.0);
        f_prev = f;
        if ((n + 1) % cadence == 0 || n == nsteps - 1) record((n + 1) * spec.dt, res);
    }
    const std::string out = spec.out_path.empty() ? "simulate.csv" : spec.out_path;
    write_timeseries(ledger, out);
    checkpoint_write(micro, macro, grid, out + ".ckpt");
    return 0;
}

int run_bd_oracle(const RunSpec& spec) {
    const PotentialParams params{spec.k, 1.0, 1.0, spec.nu};
    FlowProtocol protocol;
    protocol.kind = protocol_kind_from_string(spec.protocol);
    protocol.rate = spec.rate;
    protocol.omega = spec.omega;
    const auto records = bd_run(protocol, spec.bd_paths, spec.T, spec.dt, spec.seed, params,
                                spec.record_every);
    std::string out = "t,tau_xx,tau_xy,tau_yy,se_xx,se_xy,se_yy\n";
    for (const BDRecord& r : records) {
        out += fmt17(r.t);
        for (double v : {r.stress.tau.xx, r.stress.tau.xy, r.stress.tau.yy, r.stress.stderr_.xx,
                         r.stress.stderr_.xy, r.stress.stderr_.yy}) {
            out += ',';
            out += fmt17(v);
        }
        out += '\n';
    }
    const std::string path = spec.out_path.empty() ? "bd_oracle.csv" : spec.out_path;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << out;
    return 0;
}

int run_validate_inequalities(const RunSpec& spec, std::ostream& os) {
    struct Case {
        InequalityKind kind;
        const char* name;
    };
    std::vector<Case> cases;
    for (double k : {1.5, 2.0})
        cases.push_back({{InequalityKind::Tag::hardy1, k}, "hardy1"});
    for (double k : {0.5, 1.0, 2.0})
        cases.push_back({{InequalityKind::Tag::hardy_inter, k}, "hardy_inter"});
    cases.push_back({{InequalityKind::Tag::hardy_inter2, 1.0, 0.5}, "hardy_inter2"});
    cases.push_back({{InequalityKind::Tag::hardy_inter2, 0.8, 0.3}, "hardy_inter2"});
    for (double g : {0.5, 1.0}) {
        InequalityKind kind{InequalityKind::Tag::hardy_inter_log, 1.0, 0.5};
        kind.gamma = g;
        cases.push_back({kind, "hardy_inter_log"});
    }
    os << "kind k beta gamma sup_finest rel_change\n";
    for (const Case& c : cases) {
        const auto fam = standard_profile_family(c.kind.k);
        const ConstantReport rep = empirical_constant(c.kind, fam);
        os << c.name << ' ' << c.kind.k << ' ' << c.kind.beta << ' ' << c.kind.gamma << ' '
           << rep.sup_ratio.back() << ' ' << rep.relative_change << '\n';
    }
    // out-of-window sweep demonstrating the k > 1 requirement of hardy1
    InequalityKind bad{InequalityKind::Tag::hardy1, 0.9};
    bad.override_window = true;
    const ConstantReport rep =
        empirical_constant(bad, standard_profile_family(0.9), 4, 200, true);
    os << "hardy1-counterexample k=0.9 growth:";
    for (double g : rep.growth_factor) os << ' ' << g;
    os << '\n';

    // weighted Sobolev sweep on the 2D grid
    const PotentialParams params{spec.k, 1.0, 1.0, spec.nu};
    const ConfigGrid grid = build_config_grid(spec.nr, spec.ntheta);
    std::vector<double> v = equilibrium_samples(grid, params);
    for (int i = 0; i < grid.nr(); ++i)
        for (int j = 0; j < grid.ntheta(); ++j)
            v[grid.index(i, j)] *= 1.0 + 0.5 * std::cos(grid.theta_center(j));
    const PhaseDensity psi = PhaseDensity::from_values(std::move(v), grid);
    for (double p : {2.1, 2.5, 3.0}) {
        const Sides s = wsi_sides(psi, p, grid, params);
        os << "wsi p=" << p << " ratio " << s.ratio << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FENE dumbbell micro-macro simulator"};
    std::string mode, config_path, out_override;
    std::uint64_t seed_override = 0;
    bool have_seed = false;
    app.add_option("mode", mode, "simulate | bd-oracle | validate-inequalities | diagnose")
        ->required();
    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--out", out_override, "output path override");
    app.add_option("--seed", seed_override, "seed override")->each([&](const std::string&) {
        have_seed = true;
    });
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        fene::RunSpec spec = fene::parse_config(read_file(config_path));
        if (!out_override.empty()) spec.out_path = out_override;
        if (have_seed) spec.seed = seed_override;
        if (const char* threads = std::getenv("FENE_THREADS")) {
            const long t = std::strtol(threads, nullptr, 10);
            if (t < 1) throw std::invalid_argument("FENE_THREADS must be a positive integer");
        }
        using Mode = fene::RunSpec::Mode;
        const Mode requested = mode == "simulate"            ? Mode::simulate
                               : mode == "bd-oracle"         ? Mode::bd_oracle
                               : mode == "validate-inequalities" ? Mode::validate_inequalities
                               : mode == "diagnose"          ? Mode::diagnose
                                                             : throw std::invalid_argument(
                                                                   "unknown mode " + mode);
        if (requested != spec.mode)
            throw std::invalid_argument("config mode does not match the requested mode");
        switch (spec.mode) {
            case Mode::simulate: return run_simulate(spec);
            case Mode::bd_oracle: return run_bd_oracle(spec);
            case Mode::validate_inequalities: return run_validate_inequalities(spec, std::cout);
            case Mode::diagnose: return run_diagnose(spec);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
