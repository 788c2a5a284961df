#include "dfdt/params.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

namespace dfdt {

namespace {

const std::array<const char*, 21> kKnownKeys = {
    "Nx", "Ny", "nx", "Delta", "k", "k1", "k2", "w0", "gamma",
    "init_cond", "alpha", "alpha1", "alpha2", "identical_photons",
    "save_chi", "save_psi", "save_psi_binary", "save_psi_square_integral",
    "measure_NM", "Tstep", "Nth",
};

bool known_key(const std::string& key) {
    return std::find_if(kKnownKeys.begin(), kKnownKeys.end(),
                        [&](const char* k) { return key == k; }) != kKnownKeys.end();
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::int64_t parse_exact_int(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    if (v.empty()) throw ValidationError(key + ": empty integer value");
    std::size_t pos = 0;
    long long out = 0;
    try {
        out = std::stoll(v, &pos, 10);
    } catch (const std::exception&) {
        throw ValidationError(key + ": not an exact integer: '" + v + "'");
    }
    if (pos != v.size())
        throw ValidationError(key + ": not an exact integer: '" + v + "'");
    return out;
}

double parse_real(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    if (v.empty()) throw ValidationError(key + ": empty numeric value");
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ValidationError(key + ": not a number: '" + v + "'");
    }
    if (pos != v.size()) throw ValidationError(key + ": not a number: '" + v + "'");
    if (!std::isfinite(out)) throw ValidationError(key + ": value must be finite");
    return out;
}

bool parse_flag(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    if (v == "0") return false;
    if (v == "1") return true;
    throw ValidationError(key + ": flags take 0 or 1, got '" + v + "'");
}

} // namespace

RawInput parse_input(std::istream& in) {
    RawInput raw;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key=value, got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty())
            throw ParseError("line " + std::to_string(lineno) + ": missing key before '='");
        if (value.empty())
            throw ParseError("line " + std::to_string(lineno) + ": missing value for '" + key + "'");
        if (!known_key(key))
            throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (raw.has(key))
            throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        raw.values.emplace(key, value);
    }
    return raw;
}

RawInput parse_input_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open input file: " + path);
    return parse_input(f);
}

SimParams validate(const RawInput& raw, std::vector<std::string>* warnings) {
    auto require = [&](const char* key) {
        if (!raw.has(key))
            throw ValidationError(std::string("missing mandatory key: ") + key);
        return raw.values.at(key);
    };
    auto optional_int = [&](const char* key, std::int64_t def) {
        return raw.has(key) ? parse_exact_int(key, raw.values.at(key)) : def;
    };
    auto optional_real = [&](const char* key, double def) {
        return raw.has(key) ? parse_real(key, raw.values.at(key)) : def;
    };
    auto optional_flag = [&](const char* key, bool def) {
        return raw.has(key) ? parse_flag(key, raw.values.at(key)) : def;
    };

    SimParams p;
    p.Nx = parse_exact_int("Nx", require("Nx"));
    p.Ny = parse_exact_int("Ny", require("Ny"));
    p.nx = parse_exact_int("nx", require("nx"));
    p.Delta = parse_real("Delta", require("Delta"));
    p.w0 = parse_real("w0", require("w0"));
    p.gamma = parse_real("gamma", require("gamma"));

    const std::int64_t ic = parse_exact_int("init_cond", require("init_cond"));
    if (ic < 1 || ic > 3)
        throw ValidationError("init_cond: must be 1, 2, or 3, got " + std::to_string(ic));
    p.init_cond = static_cast<InitialCondition>(ic);

    p.identical_photons = optional_flag("identical_photons", true);
    p.alpha = optional_real("alpha", 0.0);
    p.alpha1 = optional_real("alpha1", 0.0);
    p.alpha2 = optional_real("alpha2", 0.0);
    p.k1 = optional_real("k1", 0.0);
    p.k2 = optional_real("k2", 0.0);

    p.save_chi = optional_flag("save_chi", false);
    p.save_psi = optional_flag("save_psi", false);
    p.save_psi_binary = optional_flag("save_psi_binary", false);
    p.save_psi_square_integral = optional_flag("save_psi_square_integral", false);
    p.measure_NM = optional_flag("measure_NM", false);
    p.Tstep = optional_int("Tstep", 0);
    const std::int64_t nth = optional_int("Nth", 1);

    if (p.Nx < 1) throw ValidationError("Nx: must be a positive integer");
    if (p.Ny < 1) throw ValidationError("Ny: must be a positive integer");
    if (p.nx < 2 || p.nx % 2 != 0)
        throw ValidationError("nx: must be a positive integer multiple of 2");
    if (p.nx > 2 * p.Nx) throw ValidationError("nx: must satisfy nx <= 2*Nx");
    if (!(p.Delta > 0.0)) throw ValidationError("Delta: must be positive");
    if (!(p.gamma > 0.0)) throw ValidationError("gamma: must be positive");
    if (p.Tstep < 0) throw ValidationError("Tstep: must be nonnegative");
    if (nth < 1) throw ValidationError("Nth: must be a positive integer");
    if (nth > std::numeric_limits<int>::max())
        throw ValidationError("Nth: out of range");
    p.Nth = static_cast<int>(nth);

    // `k` drives classes 1 and 2, and class 3 when the pair is identical.
    const bool needs_k = p.init_cond != InitialCondition::TwoPhotonWavepacket ||
                         p.identical_photons;
    if (needs_k) {
        p.k = parse_real("k", require("k"));
    } else {
        p.k = optional_real("k", 0.0);
    }

    switch (p.init_cond) {
    case InitialCondition::TwoPhotonPlaneWave:
        break;
    case InitialCondition::StimulatedEmission:
        if (!raw.has("alpha"))
            throw ValidationError("alpha: required when init_cond=2");
        if (!(p.alpha > 0.0))
            throw ValidationError("alpha: must be positive when init_cond=2");
        break;
    case InitialCondition::TwoPhotonWavepacket:
        if (p.identical_photons) {
            if (!raw.has("alpha"))
                throw ValidationError("alpha: required when init_cond=3 with identical photons");
            if (!(p.alpha > 0.0))
                throw ValidationError("alpha: must be positive when init_cond=3");
            p.k1 = p.k2 = p.k;
            p.alpha1 = p.alpha2 = p.alpha;
        } else {
            for (const char* key : {"k1", "k2", "alpha1", "alpha2"}) {
                if (!raw.has(key))
                    throw ValidationError(std::string(key) +
                                          ": required when init_cond=3 and identical_photons=0");
            }
            if (!(p.alpha1 > 0.0)) throw ValidationError("alpha1: must be positive");
            if (!(p.alpha2 > 0.0)) throw ValidationError("alpha2: must be positive");
        }
        break;
    }

    if (!p.save_chi && !p.save_psi && !p.save_psi_binary &&
        !p.save_psi_square_integral && !p.measure_NM)
        throw ValidationError("all output options are off; enable at least one of "
                              "save_chi/save_psi/save_psi_binary/save_psi_square_integral/measure_NM");
    if (p.measure_NM && p.init_cond != InitialCondition::StimulatedEmission)
        throw ValidationError("measure_NM=1 requires init_cond=2");

    p.a = 0.5 * static_cast<double>(p.nx) * p.Delta;
    p.total_cols = 2 * p.Nx + p.nx + 1;

    if (warnings && p.w0 / p.gamma < 10.0) {
        std::ostringstream os;
        os << "w0/gamma = " << p.w0 / p.gamma
           << " < 10: rotating-wave approximation is marginal";
        warnings->push_back(os.str());
    }
    return p;
}

PhysicalValues convert_physical(const PhysicalSpec& spec) {
    if (spec.nx == 0) throw ValidationError("convert_physical: nx must be nonzero");
    if (spec.W == 0.0) throw ValidationError("convert_physical: W must be nonzero");
    if (spec.n == 0.0) throw ValidationError("convert_physical: n must be nonzero");
    if (!(spec.Delta > 0.0)) throw ValidationError("convert_physical: Delta must be positive");

    const double pi = std::acos(-1.0);
    const double nx = static_cast<double>(spec.nx);
    PhysicalValues v;
    v.k = 2.0 * spec.n * pi * spec.K / (nx * spec.W * spec.Delta);
    v.w0 = 2.0 * spec.n * pi / (nx * spec.Delta);
    v.gamma = 2.0 * spec.n * pi / (nx * spec.W * spec.Delta);
    v.lambda0 = nx / spec.n * spec.Delta;
    return v;
}

std::uint64_t memory_estimate(const SimParams& p) {
    const auto ny = static_cast<unsigned __int128>(p.Ny);
    const auto cols = static_cast<unsigned __int128>(p.total_cols);
    const unsigned __int128 bytes = 16 * ny * cols;
    if (bytes > std::numeric_limits<std::uint64_t>::max())
        throw ValidationError("memory estimate overflows a 64-bit byte count; refusing to allocate");
    return static_cast<std::uint64_t>(bytes);
}

std::vector<std::string> parameter_echo(const SimParams& p) {
    std::vector<std::string> lines;
    auto add = [&](const std::string& s) { lines.push_back("# " + s); };
    std::ostringstream os;
    os.precision(17);
    auto num = [&](double v) {
        os.str("");
        os << v;
        return os.str();
    };
    add("Nx = " + std::to_string(p.Nx));
    add("Ny = " + std::to_string(p.Ny));
    add("nx = " + std::to_string(p.nx));
    add("Delta = " + num(p.Delta));
    add("k = " + num(p.k));
    add("k1 = " + num(p.k1));
    add("k2 = " + num(p.k2));
    add("w0 = " + num(p.w0));
    add("gamma = " + num(p.gamma));
    add("init_cond = " + std::to_string(static_cast<int>(p.init_cond)));
    add("alpha = " + num(p.alpha));
    add("alpha1 = " + num(p.alpha1));
    add("alpha2 = " + num(p.alpha2));
    add("identical_photons = " + std::to_string(p.identical_photons ? 1 : 0));
    add("save_chi = " + std::to_string(p.save_chi ? 1 : 0));
    add("save_psi = " + std::to_string(p.save_psi ? 1 : 0));
    add("save_psi_binary = " + std::to_string(p.save_psi_binary ? 1 : 0));
    add("save_psi_square_integral = " + std::to_string(p.save_psi_square_integral ? 1 : 0));
    add("measure_NM = " + std::to_string(p.measure_NM ? 1 : 0));
    add("Tstep = " + std::to_string(p.Tstep));
    add("Nth = " + std::to_string(p.Nth));
    add("a = " + num(p.a));
    add("total_cols = " + std::to_string(p.total_cols));
    add("theta_zero_convention = 1");
    return lines;
}

} // namespace dfdt
