#include "fene/macro_flow.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace fene {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
using cplx = std::complex<double>;

/// Cached FFTW plans for one grid size. Forward output is normalized by
/// 1/(nx*ny) so stored coefficients are true Fourier coefficients.
class Fourier {
public:
    static Fourier& get(int nx, int ny) {
        static std::map<std::pair<int, int>, Fourier> cache;
        return cache.try_emplace(std::make_pair(nx, ny), nx, ny).first->second;
    }

    Fourier(int nx, int ny) : nx_(nx), ny_(ny), nm_(nx * (ny / 2 + 1)) {
        if (nx < 4 || ny < 4 || nx % 2 != 0 || ny % 2 != 0)
            throw std::invalid_argument("MacroState: nx, ny must be even and >= 4");
        rbuf_ = fftw_alloc_real(static_cast<size_t>(nx) * ny);
        cbuf_ = fftw_alloc_complex(nm_);
        fwd_ = fftw_plan_dft_r2c_2d(nx, ny, rbuf_, cbuf_, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_2d(nx, ny, cbuf_, rbuf_, FFTW_ESTIMATE);
    }
    Fourier(const Fourier&) = delete;
    Fourier(Fourier&& o) = delete;
    ~Fourier() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(rbuf_);
        fftw_free(cbuf_);
    }

    int modes() const { return nm_; }

    std::vector<cplx> forward(std::span<const double> u) {
        std::copy(u.begin(), u.end(), rbuf_);
        fftw_execute(fwd_);
        std::vector<cplx> out(nm_);
        const double inv = 1.0 / (static_cast<double>(nx_) * ny_);
        for (int m = 0; m < nm_; ++m) out[m] = cplx(cbuf_[m][0], cbuf_[m][1]) * inv;
        return out;
    }

    std::vector<double> inverse(std::span<const cplx> uhat) {
        for (int m = 0; m < nm_; ++m) {
            cbuf_[m][0] = uhat[m].real();
            cbuf_[m][1] = uhat[m].imag();
        }
        fftw_execute(bwd_);
        return std::vector<double>(rbuf_, rbuf_ + static_cast<size_t>(nx_) * ny_);
    }

private:
    int nx_, ny_, nm_;
    double* rbuf_;
    fftw_complex* cbuf_;
    fftw_plan fwd_, bwd_;
};

int wave_x(int ix, int nx) { return ix <= nx / 2 ? ix : ix - nx; }

struct ModeIter {
    int nx, ny;
    int cols;
    ModeIter(int nx_, int ny_) : nx(nx_), ny(ny_), cols(ny_ / 2 + 1) {}
    int index(int ix, int iy) const { return ix * cols + iy; }
    /// Hermitian multiplicity of the stored mode.
    double weight(int iy) const { return (iy == 0 || iy == ny / 2) ? 1.0 : 2.0; }
};

void project_divfree(std::vector<cplx>& ux, std::vector<cplx>& uy, int nx, int ny) {
    ModeIter mi(nx, ny);
    for (int ix = 0; ix < nx; ++ix) {
        const double kx = wave_x(ix, nx);
        for (int iy = 0; iy < mi.cols; ++iy) {
            const double ky = iy;
            const double k2 = kx * kx + ky * ky;
            if (k2 == 0.0) continue;
            const int m = mi.index(ix, iy);
            const cplx d = (kx * ux[m] + ky * uy[m]) / k2;
            ux[m] -= kx * d;
            uy[m] -= ky * d;
        }
    }
}

void dealias(std::vector<cplx>& f, int nx, int ny) {
    ModeIter mi(nx, ny);
    const int cx = nx / 3, cy = ny / 3;
    for (int ix = 0; ix < nx; ++ix) {
        const int kx = wave_x(ix, nx);
        for (int iy = 0; iy < mi.cols; ++iy)
            if (std::abs(kx) > cx || iy > cy) f[mi.index(ix, iy)] = 0.0;
    }
}

std::vector<double> derivative(const MacroState& s, const std::vector<cplx>& f, bool in_x) {
    ModeIter mi(s.nx, s.ny);
    std::vector<cplx> d(f.size());
    for (int ix = 0; ix < s.nx; ++ix) {
        const double kx = wave_x(ix, s.nx);
        for (int iy = 0; iy < mi.cols; ++iy) {
            const double k = in_x ? kx : iy;
            d[mi.index(ix, iy)] = cplx(0.0, k) * f[mi.index(ix, iy)];
        }
    }
    // Nyquist column of an odd symbol has no Hermitian partner; drop it.
    if (in_x && s.nx % 2 == 0)
        for (int iy = 0; iy < mi.cols; ++iy) d[mi.index(s.nx / 2, iy)] = 0.0;
    if (!in_x && s.ny % 2 == 0)
        for (int ix = 0; ix < s.nx; ++ix) d[mi.index(ix, s.ny / 2)] = 0.0;
    return Fourier::get(s.nx, s.ny).inverse(d);
}

}  // namespace

FlowProtocol::Kind protocol_kind_from_string(const std::string& s) {
    if (s == "steady_shear") return FlowProtocol::Kind::steady_shear;
    if (s == "planar_extension") return FlowProtocol::Kind::planar_extension;
    if (s == "time_periodic_shear") return FlowProtocol::Kind::time_periodic_shear;
    if (s == "coupled") return FlowProtocol::Kind::coupled;
    throw std::invalid_argument("unknown protocol kind: " + s);
}

VelocityGradient protocol_kappa(const FlowProtocol& protocol, double t) {
    if (t < 0.0) throw std::invalid_argument("protocol_kappa: t must be >= 0");
    VelocityGradient kg;
    switch (protocol.kind) {
        case FlowProtocol::Kind::steady_shear:
            kg.kappa[0][1] = protocol.rate;
            break;
        case FlowProtocol::Kind::planar_extension:
            kg.kappa[0][0] = protocol.rate;
            kg.kappa[1][1] = -protocol.rate;
            break;
        case FlowProtocol::Kind::time_periodic_shear:
            kg.kappa[0][1] = protocol.rate * std::cos(protocol.omega * t);
            break;
        case FlowProtocol::Kind::coupled:
            throw std::invalid_argument("protocol_kappa: coupled protocol has no prescribed kappa");
    }
    return kg;
}

MacroState make_macro_state(int nx, int ny) {
    Fourier::get(nx, ny);  // validates sizes
    MacroState s;
    s.nx = nx;
    s.ny = ny;
    s.uhat_x.assign(static_cast<size_t>(nx) * (ny / 2 + 1), cplx(0.0, 0.0));
    s.uhat_y = s.uhat_x;
    return s;
}

MacroState taylor_green(int nx, int ny, double amplitude) {
    MacroState s = make_macro_state(nx, ny);
    std::vector<double> ux(static_cast<size_t>(nx) * ny), uy(ux.size());
    for (int ix = 0; ix < nx; ++ix) {
        const double x = kTwoPi * ix / nx;
        for (int iy = 0; iy < ny; ++iy) {
            const double y = kTwoPi * iy / ny;
            ux[static_cast<size_t>(ix) * ny + iy] = amplitude * std::sin(x) * std::cos(y);
            uy[static_cast<size_t>(ix) * ny + iy] = -amplitude * std::cos(x) * std::sin(y);
        }
    }
    auto& fft = Fourier::get(nx, ny);
    s.uhat_x = fft.forward(ux);
    s.uhat_y = fft.forward(uy);
    project_divfree(s.uhat_x, s.uhat_y, nx, ny);
    return s;
}

std::vector<double> macro_velocity_x(const MacroState& s) {
    return Fourier::get(s.nx, s.ny).inverse(s.uhat_x);
}
std::vector<double> macro_velocity_y(const MacroState& s) {
    return Fourier::get(s.nx, s.ny).inverse(s.uhat_y);
}

std::vector<VelocityGradient> velocity_gradient_field(const MacroState& s) {
    const auto dxux = derivative(s, s.uhat_x, true);
    const auto dyux = derivative(s, s.uhat_x, false);
    const auto dxuy = derivative(s, s.uhat_y, true);
    const auto dyuy = derivative(s, s.uhat_y, false);
    std::vector<VelocityGradient> out(dxux.size());
    for (size_t p = 0; p < out.size(); ++p) {
        Mat2& k = out[p].kappa;
        k[0][0] = dxux[p];
        k[0][1] = dyux[p];
        k[1][0] = dxuy[p];
        k[1][1] = dyuy[p];
        const double half_tr = 0.5 * (k[0][0] + k[1][1]);
        k[0][0] -= half_tr;
        k[1][1] -= half_tr;
    }
    return out;
}

double kinetic_energy(const MacroState& s) {
    ModeIter mi(s.nx, s.ny);
    double e = 0.0;
    for (int ix = 0; ix < s.nx; ++ix)
        for (int iy = 0; iy < mi.cols; ++iy) {
            const int m = mi.index(ix, iy);
            e += mi.weight(iy) * (std::norm(s.uhat_x[m]) + std::norm(s.uhat_y[m]));
        }
    return 0.5 * kTwoPi * kTwoPi * e;
}

double velocity_gradient_norm_sq(const MacroState& s) {
    ModeIter mi(s.nx, s.ny);
    double e = 0.0;
    for (int ix = 0; ix < s.nx; ++ix) {
        const double kx = wave_x(ix, s.nx);
        for (int iy = 0; iy < mi.cols; ++iy) {
            const double k2 = kx * kx + static_cast<double>(iy) * iy;
            const int m = mi.index(ix, iy);
            e += mi.weight(iy) * k2 * (std::norm(s.uhat_x[m]) + std::norm(s.uhat_y[m]));
        }
    }
    return kTwoPi * kTwoPi * e;
}

double max_divergence(const MacroState& s) {
    ModeIter mi(s.nx, s.ny);
    double worst = 0.0;
    for (int ix = 0; ix < s.nx; ++ix) {
        const double kx = wave_x(ix, s.nx);
        for (int iy = 0; iy < mi.cols; ++iy) {
            const int m = mi.index(ix, iy);
            worst = std::max(worst, std::abs(kx * s.uhat_x[m] + static_cast<double>(iy) * s.uhat_y[m]));
        }
    }
    return worst;
}

double max_speed(const MacroState& s) {
    const auto ux = macro_velocity_x(s);
    const auto uy = macro_velocity_y(s);
    double worst = 0.0;
    for (size_t p = 0; p < ux.size(); ++p)
        worst = std::max(worst, std::hypot(ux[p], uy[p]));
    return worst;
}

double mode_amplitude(const MacroState& s, int kx, int ky) {
    if (ky < 0 || ky > s.ny / 2) throw std::invalid_argument("mode_amplitude: ky out of range");
    const int ix = kx >= 0 ? kx : kx + s.nx;
    ModeIter mi(s.nx, s.ny);
    const int m = mi.index(ix, ky);
    return std::sqrt(std::norm(s.uhat_x[m]) + std::norm(s.uhat_y[m]));
}

MacroState ns_step(const MacroState& state, std::span<const StressTensor> tau_field, double dt,
                   const PotentialParams& params, const FlowProtocol& protocol) {
    if (!(dt > 0.0)) throw std::invalid_argument("ns_step: dt must be > 0");
    const int nx = state.nx, ny = state.ny;
    auto& fft = Fourier::get(nx, ny);
    ModeIter mi(nx, ny);

    const double dx = kTwoPi / nx, dy = kTwoPi / ny;
    const auto ux = macro_velocity_x(state);
    const auto uy = macro_velocity_y(state);
    double cfl = 0.0;
    for (size_t p = 0; p < ux.size(); ++p)
        cfl = std::max(cfl, std::abs(ux[p]) / dx + std::abs(uy[p]) / dy);
    if (dt * cfl > 1.0) throw std::invalid_argument("ns_step: advective CFL violated");

    // Nonlinear term -(u . grad) u, pseudo-spectral with 2/3 dealiasing.
    const auto dxux = derivative(state, state.uhat_x, true);
    const auto dyux = derivative(state, state.uhat_x, false);
    const auto dxuy = derivative(state, state.uhat_y, true);
    const auto dyuy = derivative(state, state.uhat_y, false);
    std::vector<double> nlx(ux.size()), nly(ux.size());
    for (size_t p = 0; p < ux.size(); ++p) {
        nlx[p] = -(ux[p] * dxux[p] + uy[p] * dyux[p]);
        nly[p] = -(ux[p] * dxuy[p] + uy[p] * dyuy[p]);
    }
    std::vector<cplx> rhs_x = fft.forward(nlx);
    std::vector<cplx> rhs_y = fft.forward(nly);
    dealias(rhs_x, nx, ny);
    dealias(rhs_y, nx, ny);

    if (!tau_field.empty()) {
        if (static_cast<int>(tau_field.size()) != nx * ny)
            throw std::invalid_argument("ns_step: tau field size mismatch");
        std::vector<double> txx(ux.size()), txy(ux.size()), tyy(ux.size());
        for (size_t p = 0; p < ux.size(); ++p) {
            txx[p] = tau_field[p].xx;
            txy[p] = tau_field[p].xy;
            tyy[p] = tau_field[p].yy;
        }
        const auto hxx = fft.forward(txx);
        const auto hxy = fft.forward(txy);
        const auto hyy = fft.forward(tyy);
        for (int ix = 0; ix < nx; ++ix) {
            const double kx = (ix == nx / 2) ? 0.0 : wave_x(ix, nx);
            for (int iy = 0; iy < mi.cols; ++iy) {
                const double ky = (iy == ny / 2) ? 0.0 : iy;
                const int m = mi.index(ix, iy);
                rhs_x[m] += cplx(0.0, 1.0) * (kx * hxx[m] + ky * hxy[m]);
                rhs_y[m] += cplx(0.0, 1.0) * (kx * hxy[m] + ky * hyy[m]);
            }
        }
    }

    project_divfree(rhs_x, rhs_y, nx, ny);

    MacroState next = state;
    next.time = state.time + dt;
    for (int ix = 0; ix < nx; ++ix) {
        const double kx = wave_x(ix, nx);
        for (int iy = 0; iy < mi.cols; ++iy) {
            const double k2 = kx * kx + static_cast<double>(iy) * iy;
            double symbol = params.nu * k2;
            if (protocol.hyper_strength > 0.0)
                symbol += protocol.hyper_strength * std::pow(k2, 2.0 * protocol.hyper_exponent);
            const double damp = std::exp(-symbol * dt);
            const int m = mi.index(ix, iy);
            next.uhat_x[m] = damp * (state.uhat_x[m] + dt * rhs_x[m]);
            next.uhat_y[m] = damp * (state.uhat_y[m] + dt * rhs_y[m]);
        }
    }
    project_divfree(next.uhat_x, next.uhat_y, nx, ny);
    return next;
}

void couple_step(MacroState& macro, std::vector<PhaseDensity>& micro, double dt,
                 const FokkerPlanckSolver& fp, const PotentialParams& params,
                 const FlowProtocol& protocol) {
    const int nx = macro.nx, ny = macro.ny;
    const size_t npts = static_cast<size_t>(nx) * ny;
    if (micro.size() != npts) throw std::invalid_argument("couple_step: micro field size mismatch");
    if (std::abs(fp.dt() - dt) > 1e-15 * dt)
        throw std::invalid_argument("couple_step: solver dt does not match step dt");

    const ConfigGrid& grid = fp.grid();
    std::vector<StressTensor> tau(npts);
    for (size_t p = 0; p < npts; ++p) tau[p] = kramers_stress(micro[p], grid, params);

    macro = ns_step(macro, tau, dt, params, protocol);

    // Streamfunction on cell corners: u = d_y chi, v = -d_x chi. Differencing
    // chi along the faces gives exactly divergence-free face fluxes, so the
    // upwind transport below telescopes (mass) and is monotone (rho bounds).
    auto& fft = Fourier::get(nx, ny);
    ModeIter mi(nx, ny);
    std::vector<cplx> chihat(macro.uhat_x.size(), cplx(0.0, 0.0));
    const double dx = kTwoPi / nx, dy = kTwoPi / ny;
    for (int ix = 0; ix < nx; ++ix) {
        const double kx = (ix == nx / 2) ? 0.0 : wave_x(ix, nx);
        for (int iy = 0; iy < mi.cols; ++iy) {
            const double ky = (iy == ny / 2) ? 0.0 : iy;
            const double k2 = kx * kx + ky * ky;
            if (k2 == 0.0) continue;
            const int m = mi.index(ix, iy);
            const cplx omega = cplx(0.0, 1.0) * (kx * macro.uhat_y[m] - ky * macro.uhat_x[m]);
            // shift to the lower-left corner of cell (ix, iy)
            chihat[m] = omega / k2 * std::exp(cplx(0.0, -0.5 * (kx * dx + ky * dy)));
        }
    }
    const std::vector<double> corner = fft.inverse(chihat);
    const double mean_u = macro.uhat_x[0].real();
    const double mean_v = macro.uhat_y[0].real();

    auto corner_at = [&](int ix, int iy) {
        return corner[static_cast<size_t>((ix % nx + nx) % nx) * ny + (iy % ny + ny) % ny];
    };
    // Face-integrated velocities, outward through the right/top face of (ix, iy).
    std::vector<double> flux_r(npts), flux_t(npts);
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy) {
            const size_t p = static_cast<size_t>(ix) * ny + iy;
            flux_r[p] = corner_at(ix + 1, iy + 1) - corner_at(ix + 1, iy) + mean_u * dy;
            flux_t[p] = -(corner_at(ix + 1, iy + 1) - corner_at(ix, iy + 1)) + mean_v * dx;
        }

    const double area = dx * dy;
    double cfl = 0.0;
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy) {
            const size_t p = static_cast<size_t>(ix) * ny + iy;
            const size_t left = static_cast<size_t>((ix + nx - 1) % nx) * ny + iy;
            const size_t below = static_cast<size_t>(ix) * ny + (iy + ny - 1) % ny;
            const double outflow = std::max(flux_r[p], 0.0) + std::max(flux_t[p], 0.0) +
                                   std::max(-flux_r[left], 0.0) + std::max(-flux_t[below], 0.0);
            cfl = std::max(cfl, outflow / area);
        }
    if (dt * cfl > 1.0) throw std::invalid_argument("couple_step: transport CFL violated");

    const int ncfg = grid.size();
    std::vector<std::vector<double>> updated(npts);
    for (size_t p = 0; p < npts; ++p) updated[p] = micro[p].values;
    auto advect_face = [&](size_t from, size_t to, double flux) {
        const double c = dt * flux / area;
        const std::vector<double>& up = flux > 0.0 ? micro[from].values : micro[to].values;
        for (int q = 0; q < ncfg; ++q) {
            const double amount = c * up[q];
            updated[from][q] -= amount;
            updated[to][q] += amount;
        }
    };
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy) {
            const size_t p = static_cast<size_t>(ix) * ny + iy;
            advect_face(p, static_cast<size_t>((ix + 1) % nx) * ny + iy, flux_r[p]);
            advect_face(p, static_cast<size_t>(ix) * ny + (iy + 1) % ny, flux_t[p]);
        }

    const std::vector<VelocityGradient> kappa = velocity_gradient_field(macro);
    for (size_t p = 0; p < npts; ++p) {
        PhaseDensity psi = PhaseDensity::from_values(std::move(updated[p]), grid);
        micro[p] = fp.step(psi, kappa[p]);
    }
}

}  // namespace fene
