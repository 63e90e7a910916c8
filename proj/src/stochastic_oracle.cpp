#include "fene/stochastic_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fene {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform in (0, 1); the offset keeps log() finite.
double uniform01(std::uint64_t& state) {
    return (static_cast<double>(splitmix64(state) >> 11) + 0.5) * 0x1.0p-53;
}

Vec2 gaussian_pair(std::uint64_t& state) {
    const double u1 = uniform01(state);
    const double u2 = uniform01(state);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
}

std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index) {
    // Hash (seed, index) through the splitmix64 finalizer so per-path
    // stream states are scattered, not a lagged arithmetic progression
    // that would alias with the generator's own increment.
    std::uint64_t s = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    return splitmix64(s);
}

Vec2 drift(const Vec2& R, const Mat2& kappa, double k) {
    const double r2 = R[0] * R[0] + R[1] * R[1];
    const double c = 2.0 * k / (1.0 - r2);
    return {kappa[0][0] * R[0] + kappa[0][1] * R[1] - c * R[0],
            kappa[1][0] * R[0] + kappa[1][1] * R[1] - c * R[1]};
}

}  // namespace

BDEnsemble bd_init_equilibrium(int M, const PotentialParams& params, std::uint64_t seed) {
    if (M < 1) throw std::invalid_argument("bd_init_equilibrium: M must be >= 1");
    params.validate();
    BDEnsemble e;
    e.paths.resize(M);
    e.rng_state.resize(M);
    for (int m = 0; m < M; ++m) {
        std::uint64_t& s = e.rng_state[m];
        s = path_seed(seed, static_cast<std::uint64_t>(m));
        for (;;) {
            const double r = std::sqrt(uniform01(s));
            const double th = kTwoPi * uniform01(s);
            if (uniform01(s) <= std::pow(1.0 - r * r, params.k)) {
                e.paths[m] = {r * std::cos(th), r * std::sin(th)};
                break;
            }
        }
    }
    return e;
}

void bd_step(BDEnsemble& ensemble, const VelocityGradient& kappa, double dt,
             const PotentialParams& params) {
    if (dt < 0.0) throw std::invalid_argument("bd_step: dt must be >= 0");
    kappa.validate();
    const size_t M = ensemble.paths.size();
    constexpr int kMaxHalvings = 30;
    constexpr int kMaxResamples = 64;

    // A rejected proposal of size h is re-attempted as two recursive steps
    // of h/2 so every path advances by exactly dt of physical time; at the
    // halving cap the noise is resampled instead.
    auto advance = [&](auto&& self, Vec2& R, std::uint64_t& state, double h,
                       int depth) -> bool {
        const Vec2 b = drift(R, kappa.kappa, params.k);
        const double s = std::sqrt(2.0 * h);
        {
            const Vec2 xi = gaussian_pair(state);
            const Vec2 prop = {R[0] + b[0] * h + s * xi[0], R[1] + b[1] * h + s * xi[1]};
            if (prop[0] * prop[0] + prop[1] * prop[1] < 1.0) {
                R = prop;
                return true;
            }
        }
        if (depth < kMaxHalvings)
            return self(self, R, state, 0.5 * h, depth + 1) &&
                   self(self, R, state, 0.5 * h, depth + 1);
        for (int round = 0; round < kMaxResamples; ++round) {
            const Vec2 xi = gaussian_pair(state);
            const Vec2 prop = {R[0] + b[0] * h + s * xi[0], R[1] + b[1] * h + s * xi[1]};
            if (prop[0] * prop[0] + prop[1] * prop[1] < 1.0) {
                R = prop;
                return true;
            }
        }
        return false;
    };

    for (size_t m = 0; m < M; ++m) {
        if (dt == 0.0) continue;
        if (!advance(advance, ensemble.paths[m], ensemble.rng_state[m], dt, 0))
            throw std::runtime_error("bd_step: halving budget exhausted for path " +
                                     std::to_string(m));
    }
    ensemble.time += dt;
}

StressEstimate estimate_stress(const BDEnsemble& ensemble, const PotentialParams& params) {
    const size_t M = ensemble.paths.size();
    if (M < 2) throw std::invalid_argument("estimate_stress: M must be >= 2");
    double sum[3] = {0.0, 0.0, 0.0};
    double sumsq[3] = {0.0, 0.0, 0.0};
    for (const Vec2& R : ensemble.paths) {
        const double r2 = R[0] * R[0] + R[1] * R[1];
        const double c = 2.0 * params.k / (1.0 - r2);
        const double v[3] = {c * R[0] * R[0], c * R[0] * R[1], c * R[1] * R[1]};
        for (int q = 0; q < 3; ++q) {
            sum[q] += v[q];
            sumsq[q] += v[q] * v[q];
        }
    }
    StressEstimate est;
    double mean[3], se[3];
    for (int q = 0; q < 3; ++q) {
        mean[q] = sum[q] / static_cast<double>(M);
        const double var =
            std::max(0.0, (sumsq[q] - static_cast<double>(M) * mean[q] * mean[q]) /
                              static_cast<double>(M - 1));
        se[q] = std::sqrt(var / static_cast<double>(M));
    }
    est.tau = {mean[0], mean[1], mean[2]};
    est.stderr_ = {se[0], se[1], se[2]};
    return est;
}

std::vector<BDRecord> bd_run(const FlowProtocol& protocol, int M, double T, double dt,
                             std::uint64_t seed, const PotentialParams& params,
                             double record_dt) {
    if (T < 0.0 || dt <= 0.0) throw std::invalid_argument("bd_run: need T >= 0 and dt > 0");
    BDEnsemble e = bd_init_equilibrium(M, params, seed);
    std::vector<BDRecord> out;
    out.push_back({0.0, estimate_stress(e, params)});
    if (T == 0.0) return out;
    const long nsteps = std::lround(T / dt);
    double next_record = record_dt > 0.0 ? record_dt : T;
    for (long n = 0; n < nsteps; ++n) {
        const VelocityGradient kappa = protocol_kappa(protocol, e.time);
        bd_step(e, kappa, dt, params);
        if (e.time >= next_record - 0.5 * dt || n == nsteps - 1) {
            out.push_back({e.time, estimate_stress(e, params)});
            next_record += record_dt > 0.0 ? record_dt : T;
        }
    }
    return out;
}

double radial_ks_distance(const BDEnsemble& ensemble, double (*cdf)(double, double), double k) {
    std::vector<double> r;
    r.reserve(ensemble.paths.size());
    for (const Vec2& R : ensemble.paths) r.push_back(std::hypot(R[0], R[1]));
    std::sort(r.begin(), r.end());
    const double M = static_cast<double>(r.size());
    double worst = 0.0;
    for (size_t i = 0; i < r.size(); ++i) {
        const double f = cdf(r[i], k);
        worst = std::max(worst, std::abs((i + 1) / M - f));
        worst = std::max(worst, std::abs(f - i / M));
    }
    return worst;
}

}  // namespace fene
