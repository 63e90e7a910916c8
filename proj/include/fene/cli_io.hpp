#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fene/core.hpp"
#include "fene/diagnostics.hpp"
#include "fene/macro_flow.hpp"

namespace fene {

/// Fully validated run configuration parsed from a flat `key = value` file.
struct RunSpec {
    enum class Mode { simulate, bd_oracle, validate_inequalities, diagnose };
    Mode mode = Mode::diagnose;
    int nr = 64;
    int ntheta = 64;
    int nx = 4;
    int ny = 4;
    double k = 1.0;
    double nu = 1.0;
    double a = 8.0;
    double hyper_strength = 0.0;
    int hyper_exponent = 1;
    std::string protocol = "steady_shear";
    double rate = 1.0;
    double omega = 0.0;
    double u0_amplitude = 0.0;  ///< Taylor-Green amplitude for coupled runs
    double init_perturbation = 0.0;  ///< angular tilt of the initial density, in [0, 1)
    double dt = 1e-3;
    double T = 1.0;
    double record_every = 0.0;  ///< 0 = every step
    int bd_paths = 10000;
    std::uint64_t seed = 0;
    std::string out_path;
};

/// Parses line-based `key = value` text with `#` comments. Unknown keys and
/// out-of-window values are errors; mode is mandatory.
RunSpec parse_config(const std::string& text);

/// Inverse of parse_config on valid specs.
std::string serialize(const RunSpec& spec);

/// CSV with the fixed header
/// `t,free_energy,kinetic,rel_entropy,diss_u,diss_psi,n1,n2,residual`,
/// 17 significant digits, '\n' newlines, deterministic bytes.
void write_timeseries(const DiagnosticsLedger& ledger, const std::string& path);

/// Binary checkpoint: magic "FENE1", little-endian u32 dims (nr, ntheta,
/// nx, ny), then f64 time, the per-point configuration densities in
/// spatial row-major order (each nr*ntheta row-major), and the two physical
/// velocity components (each nx*ny row-major). Bit-exact round trip.
void checkpoint_write(const std::vector<PhaseDensity>& psi_field, const MacroState& macro,
                      const ConfigGrid& grid, const std::string& path);

struct Checkpoint {
    std::uint32_t nr = 0, ntheta = 0, nx = 0, ny = 0;
    double time = 0.0;
    std::vector<std::vector<double>> psi_values;  ///< one vector per spatial point
    std::vector<double> ux, uy;                   ///< physical velocity samples
};

Checkpoint checkpoint_read(const std::string& path);

}  // namespace fene
