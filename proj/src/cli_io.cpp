#include "fene/cli_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fene {

namespace {

constexpr char kMagic[5] = {'F', 'E', 'N', 'E', '1'};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line) {
    size_t used = 0;
    double d;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config line " + std::to_string(line) + ": bad number '" + v + "'");
    }
    if (used != v.size())
        throw std::invalid_argument("config line " + std::to_string(line) + ": bad number '" + v + "'");
    return d;
}

long long parse_int(const std::string& v, int line) {
    size_t used = 0;
    long long d;
    try {
        d = std::stoll(v, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config line " + std::to_string(line) + ": bad integer '" + v + "'");
    }
    if (used != v.size())
        throw std::invalid_argument("config line " + std::to_string(line) + ": bad integer '" + v + "'");
    return d;
}

std::string format17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_f64(std::string& out, double v) {
    char raw[8];
    std::memcpy(raw, &v, 8);
    out.append(raw, 8);
}

}  // namespace

RunSpec parse_config(const std::string& text) {
    RunSpec spec;
    bool have_mode = false;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "mode") {
            if (val == "simulate") spec.mode = RunSpec::Mode::simulate;
            else if (val == "bd-oracle") spec.mode = RunSpec::Mode::bd_oracle;
            else if (val == "validate-inequalities") spec.mode = RunSpec::Mode::validate_inequalities;
            else if (val == "diagnose") spec.mode = RunSpec::Mode::diagnose;
            else
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": unknown mode '" + val + "'");
            have_mode = true;
        } else if (key == "nr") spec.nr = static_cast<int>(parse_int(val, lineno));
        else if (key == "ntheta") spec.ntheta = static_cast<int>(parse_int(val, lineno));
        else if (key == "nx") spec.nx = static_cast<int>(parse_int(val, lineno));
        else if (key == "ny") spec.ny = static_cast<int>(parse_int(val, lineno));
        else if (key == "k") spec.k = parse_double(val, lineno);
        else if (key == "nu") spec.nu = parse_double(val, lineno);
        else if (key == "a") spec.a = parse_double(val, lineno);
        else if (key == "hyper_strength") spec.hyper_strength = parse_double(val, lineno);
        else if (key == "hyper_exponent") spec.hyper_exponent = static_cast<int>(parse_int(val, lineno));
        else if (key == "protocol") spec.protocol = val;
        else if (key == "rate") spec.rate = parse_double(val, lineno);
        else if (key == "omega") spec.omega = parse_double(val, lineno);
        else if (key == "u0_amplitude") spec.u0_amplitude = parse_double(val, lineno);
        else if (key == "init_perturbation") spec.init_perturbation = parse_double(val, lineno);
        else if (key == "dt") spec.dt = parse_double(val, lineno);
        else if (key == "T") spec.T = parse_double(val, lineno);
        else if (key == "record_every") spec.record_every = parse_double(val, lineno);
        else if (key == "bd_paths") spec.bd_paths = static_cast<int>(parse_int(val, lineno));
        else if (key == "seed") spec.seed = static_cast<std::uint64_t>(parse_int(val, lineno));
        else if (key == "out") spec.out_path = val;
        else
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
    }
    if (!have_mode) throw std::invalid_argument("config: mode is mandatory");
    if (!(spec.k > 0.0)) throw std::invalid_argument("config: k must satisfy k > 0");
    if (!(spec.nu > 0.0)) throw std::invalid_argument("config: nu must satisfy nu > 0");
    if (!(spec.a > 1.0)) throw std::invalid_argument("config: a must satisfy a > 1");
    if (spec.nr < 4 || spec.ntheta < 4)
        throw std::invalid_argument("config: nr, ntheta must be >= 4");
    if (spec.nx < 4 || spec.ny < 4 || spec.nx % 2 || spec.ny % 2)
        throw std::invalid_argument("config: nx, ny must be even and >= 4");
    if (!(spec.dt > 0.0)) throw std::invalid_argument("config: dt must be > 0");
    if (!(spec.T > 0.0)) throw std::invalid_argument("config: T must be > 0");
    if (spec.record_every < 0.0) throw std::invalid_argument("config: record_every must be >= 0");
    if (spec.bd_paths < 1) throw std::invalid_argument("config: bd_paths must be >= 1");
    if (spec.init_perturbation < 0.0 || spec.init_perturbation >= 1.0)
        throw std::invalid_argument("config: init_perturbation must be in [0, 1)");
    if (spec.hyper_strength < 0.0)
        throw std::invalid_argument("config: hyper_strength must be >= 0");
    if (spec.hyper_exponent < 1) throw std::invalid_argument("config: hyper_exponent must be >= 1");
    protocol_kind_from_string(spec.protocol);  // validates the name
    return spec;
}

std::string serialize(const RunSpec& spec) {
    std::ostringstream out;
    const char* mode = "diagnose";
    switch (spec.mode) {
        case RunSpec::Mode::simulate: mode = "simulate"; break;
        case RunSpec::Mode::bd_oracle: mode = "bd-oracle"; break;
        case RunSpec::Mode::validate_inequalities: mode = "validate-inequalities"; break;
        case RunSpec::Mode::diagnose: mode = "diagnose"; break;
    }
    out << "mode = " << mode << '\n';
    out << "nr = " << spec.nr << '\n';
    out << "ntheta = " << spec.ntheta << '\n';
    out << "nx = " << spec.nx << '\n';
    out << "ny = " << spec.ny << '\n';
    out << "k = " << format17(spec.k) << '\n';
    out << "nu = " << format17(spec.nu) << '\n';
    out << "a = " << format17(spec.a) << '\n';
    out << "hyper_strength = " << format17(spec.hyper_strength) << '\n';
    out << "hyper_exponent = " << spec.hyper_exponent << '\n';
    out << "protocol = " << spec.protocol << '\n';
    out << "rate = " << format17(spec.rate) << '\n';
    out << "omega = " << format17(spec.omega) << '\n';
    out << "u0_amplitude = " << format17(spec.u0_amplitude) << '\n';
    out << "init_perturbation = " << format17(spec.init_perturbation) << '\n';
    out << "dt = " << format17(spec.dt) << '\n';
    out << "T = " << format17(spec.T) << '\n';
    out << "record_every = " << format17(spec.record_every) << '\n';
    out << "bd_paths = " << spec.bd_paths << '\n';
    out << "seed = " << spec.seed << '\n';
    if (!spec.out_path.empty()) out << "out = " << spec.out_path << '\n';
    return out.str();
}

void write_timeseries(const DiagnosticsLedger& ledger, const std::string& path) {
    if (ledger.rows.empty()) throw std::invalid_argument("write_timeseries: ledger is empty");
    std::string out = "t,free_energy,kinetic,rel_entropy,diss_u,diss_psi,n1,n2,residual\n";
    for (const LedgerRow& r : ledger.rows) {
        out += format17(r.t);
        for (double v : {r.free_energy, r.kinetic, r.rel_entropy, r.diss_u, r.diss_psi, r.n1,
                         r.n2, r.residual}) {
            out += ',';
            out += format17(v);
        }
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("write_timeseries: cannot open " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("write_timeseries: write failed for " + path);
}

void checkpoint_write(const std::vector<PhaseDensity>& psi_field, const MacroState& macro,
                      const ConfigGrid& grid, const std::string& path) {
    const size_t npts = static_cast<size_t>(macro.nx) * macro.ny;
    if (psi_field.size() != npts)
        throw std::invalid_argument("checkpoint_write: psi field does not match macro grid");
    std::string out(kMagic, 5);
    put_u32(out, static_cast<std::uint32_t>(grid.nr()));
    put_u32(out, static_cast<std::uint32_t>(grid.ntheta()));
    put_u32(out, static_cast<std::uint32_t>(macro.nx));
    put_u32(out, static_cast<std::uint32_t>(macro.ny));
    put_f64(out, macro.time);
    for (const PhaseDensity& psi : psi_field) {
        if (static_cast<int>(psi.values.size()) != grid.size())
            throw std::invalid_argument("checkpoint_write: psi does not match grid");
        for (double v : psi.values) put_f64(out, v);
    }
    for (double v : macro_velocity_x(macro)) put_f64(out, v);
    for (double v : macro_velocity_y(macro)) put_f64(out, v);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("checkpoint_write: cannot open " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("checkpoint_write: write failed for " + path);
}

Checkpoint checkpoint_read(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("checkpoint_read: cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (data.size() < 5 + 16 + 8 || std::memcmp(data.data(), kMagic, 5) != 0)
        throw std::runtime_error("checkpoint_read: bad magic in " + path);
    size_t pos = 5;
    auto get_u32 = [&]() {
        std::uint32_t v = 0;
        for (int b = 0; b < 4; ++b)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos++])) << (8 * b);
        return v;
    };
    Checkpoint cp;
    cp.nr = get_u32();
    cp.ntheta = get_u32();
    cp.nx = get_u32();
    cp.ny = get_u32();
    const size_t ncfg = static_cast<size_t>(cp.nr) * cp.ntheta;
    const size_t npts = static_cast<size_t>(cp.nx) * cp.ny;
    const size_t expected = 5 + 16 + 8 * (1 + npts * ncfg + 2 * npts);
    if (data.size() != expected)
        throw std::runtime_error("checkpoint_read: truncated or oversized file " + path);
    auto get_f64 = [&]() {
        double v;
        std::memcpy(&v, data.data() + pos, 8);
        pos += 8;
        return v;
    };
    cp.time = get_f64();
    cp.psi_values.resize(npts);
    for (size_t p = 0; p < npts; ++p) {
        cp.psi_values[p].resize(ncfg);
        for (size_t q = 0; q < ncfg; ++q) cp.psi_values[p][q] = get_f64();
    }
    cp.ux.resize(npts);
    cp.uy.resize(npts);
    for (size_t p = 0; p < npts; ++p) cp.ux[p] = get_f64();
    for (size_t p = 0; p < npts; ++p) cp.uy[p] = get_f64();
    return cp;
}

}  // namespace fene
