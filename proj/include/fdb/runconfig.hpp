#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fdb/model1d.hpp"

namespace fdb {

struct ConfigError : std::runtime_error {
    std::vector<std::string> violations;
    explicit ConfigError(std::vector<std::string> v)
        : std::runtime_error(join(v)), violations(std::move(v)) {}
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid configuration:";
        for (const auto& x : v) s += "\n  - " + x;
        return s;
    }
};

enum class ModelKind { Boussinesq1D, Boussinesq2D, Whitham1D };
enum class InitFamily { Rest, Gaussian, PlaneWave, Random, File };

// Flat key-value experiment description (dotted section keys, diff-able).
struct RunConfig {
    ModelKind model = ModelKind::Boussinesq1D;
    bool linearized = false;

    std::size_t n = 256, n2 = 0;      // n2 = 0: same as n
    double L = 2.0 * pi, L2 = 0.0;    // L2 = 0: same as L

    double beta = 1.0;
    double s = 0.0;                   // 0: default per model (2.6 / 3.1)

    InitFamily family = InitFamily::Gaussian;
    double amplitude = 0.1;
    double sigma = 0.0;               // 0: L/16
    long mode = 4;
    long band = 10;
    double decay = 2.0;
    std::string init_file;

    Scheme scheme = Scheme::IFRK4;
    double dt = 1e-3;
    double t_end = 1.0;
    Dealias dealias = Dealias::TwoThirds;
    std::size_t output_stride = 10;

    bool monitors = true;
    double diag_s = 0.0;              // 0: same as s
    double h0 = 0.0;                  // 0: auto from the initial data
    double C1 = 1.0;
    double C2 = 10.0;

    bool period_return = false;

    std::string output_dir = "out";
    std::uint64_t seed = 1;

    bool is_2d() const { return model == ModelKind::Boussinesq2D; }
    double effective_s() const {
        if (s != 0.0) return s;
        return is_2d() ? 3.1 : 2.6;
    }
    double effective_diag_s() const { return diag_s != 0.0 ? diag_s : effective_s(); }
    std::size_t effective_n2() const { return n2 != 0 ? n2 : n; }
    double effective_L2() const { return L2 != 0.0 ? L2 : L; }
    double effective_sigma() const { return sigma != 0.0 ? sigma : L / 16.0; }
};

namespace detail {

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline bool parse_double(const std::string& v, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(v, &pos);
        return pos == v.size();
    } catch (...) {
        return false;
    }
}

inline bool parse_count(const std::string& v, std::size_t& out) {
    try {
        std::size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size() || x < 0) return false;
        out = static_cast<std::size_t>(x);
        return true;
    } catch (...) {
        return false;
    }
}

inline bool parse_long(const std::string& v, long& out) {
    try {
        std::size_t pos = 0;
        out = std::stol(v, &pos);
        return pos == v.size();
    } catch (...) {
        return false;
    }
}

inline bool parse_onoff(const std::string& v, bool& out) {
    if (v == "on" || v == "true" || v == "1") { out = true; return true; }
    if (v == "off" || v == "false" || v == "0") { out = false; return true; }
    return false;
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace detail

// Parse the flat `key = value` format; unknown keys and unparsable values are
// collected and reported together.
inline RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::vector<std::string> errors;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));
        auto bad = [&](const std::string& why) {
            errors.push_back("key '" + key + "': " + why + " (got '" + val + "')");
        };
        if (key == "model") {
            if (val == "boussinesq-1d") c.model = ModelKind::Boussinesq1D;
            else if (val == "boussinesq-2d") c.model = ModelKind::Boussinesq2D;
            else if (val == "whitham-1d") c.model = ModelKind::Whitham1D;
            else bad("unknown model");
        } else if (key == "model.linearized") {
            if (!detail::parse_onoff(val, c.linearized)) bad("expected on/off");
        } else if (key == "grid.n") {
            if (!detail::parse_count(val, c.n)) bad("expected positive integer");
        } else if (key == "grid.n2") {
            if (!detail::parse_count(val, c.n2)) bad("expected positive integer");
        } else if (key == "grid.L") {
            if (!detail::parse_double(val, c.L)) bad("expected real");
        } else if (key == "grid.L2") {
            if (!detail::parse_double(val, c.L2)) bad("expected real");
        } else if (key == "beta") {
            if (!detail::parse_double(val, c.beta)) bad("expected real");
        } else if (key == "s") {
            if (!detail::parse_double(val, c.s)) bad("expected real");
        } else if (key == "init.family") {
            if (val == "rest") c.family = InitFamily::Rest;
            else if (val == "gaussian") c.family = InitFamily::Gaussian;
            else if (val == "planewave") c.family = InitFamily::PlaneWave;
            else if (val == "random") c.family = InitFamily::Random;
            else if (val == "file") c.family = InitFamily::File;
            else bad("unknown family");
        } else if (key == "init.amplitude") {
            if (!detail::parse_double(val, c.amplitude)) bad("expected real");
        } else if (key == "init.sigma") {
            if (!detail::parse_double(val, c.sigma)) bad("expected real");
        } else if (key == "init.mode") {
            if (!detail::parse_long(val, c.mode)) bad("expected integer");
        } else if (key == "init.band") {
            if (!detail::parse_long(val, c.band)) bad("expected integer");
        } else if (key == "init.decay") {
            if (!detail::parse_double(val, c.decay)) bad("expected real");
        } else if (key == "init.file") {
            c.init_file = val;
        } else if (key == "integrator.scheme") {
            if (val == "ifrk4") c.scheme = Scheme::IFRK4;
            else if (val == "rk4") c.scheme = Scheme::RK4;
            else bad("unknown scheme");
        } else if (key == "integrator.dt") {
            if (!detail::parse_double(val, c.dt)) bad("expected real");
        } else if (key == "integrator.t-end") {
            if (!detail::parse_double(val, c.t_end)) bad("expected real");
        } else if (key == "integrator.dealias") {
            if (val == "two-thirds") c.dealias = Dealias::TwoThirds;
            else if (val == "none") c.dealias = Dealias::None;
            else bad("unknown dealias mode");
        } else if (key == "integrator.output-stride") {
            if (!detail::parse_count(val, c.output_stride)) bad("expected positive integer");
        } else if (key == "diagnostics.monitors") {
            if (!detail::parse_onoff(val, c.monitors)) bad("expected on/off");
        } else if (key == "diagnostics.s") {
            if (!detail::parse_double(val, c.diag_s)) bad("expected real");
        } else if (key == "diagnostics.h0") {
            if (!detail::parse_double(val, c.h0)) bad("expected real");
        } else if (key == "diagnostics.C1") {
            if (!detail::parse_double(val, c.C1)) bad("expected real");
        } else if (key == "diagnostics.C2") {
            if (!detail::parse_double(val, c.C2)) bad("expected real");
        } else if (key == "validation.period-return") {
            if (!detail::parse_onoff(val, c.period_return)) bad("expected on/off");
        } else if (key == "output.dir") {
            c.output_dir = val;
        } else if (key == "seed") {
            try {
                c.seed = std::stoull(val);
            } catch (...) {
                bad("expected unsigned integer");
            }
        } else {
            errors.push_back("unknown key '" + key + "'");
        }
    }
    if (!errors.empty()) throw ConfigError(errors);
    return c;
}

inline std::string model_name(ModelKind m) {
    switch (m) {
        case ModelKind::Boussinesq1D: return "boussinesq-1d";
        case ModelKind::Boussinesq2D: return "boussinesq-2d";
        case ModelKind::Whitham1D: return "whitham-1d";
    }
    return "?";
}

inline std::string family_name(InitFamily f) {
    switch (f) {
        case InitFamily::Rest: return "rest";
        case InitFamily::Gaussian: return "gaussian";
        case InitFamily::PlaneWave: return "planewave";
        case InitFamily::Random: return "random";
        case InitFamily::File: return "file";
    }
    return "?";
}

// Canonical echo: every key, fixed order, 17 significant digits.  Reparsing
// this text reproduces the run bit-exactly.
inline std::string canonical_text(const RunConfig& c) {
    using detail::fmt17;
    std::ostringstream o;
    o << "model = " << model_name(c.model) << "\n";
    o << "model.linearized = " << (c.linearized ? "on" : "off") << "\n";
    o << "grid.n = " << c.n << "\n";
    o << "grid.n2 = " << c.effective_n2() << "\n";
    o << "grid.L = " << fmt17(c.L) << "\n";
    o << "grid.L2 = " << fmt17(c.effective_L2()) << "\n";
    o << "beta = " << fmt17(c.beta) << "\n";
    o << "s = " << fmt17(c.effective_s()) << "\n";
    o << "init.family = " << family_name(c.family) << "\n";
    o << "init.amplitude = " << fmt17(c.amplitude) << "\n";
    o << "init.sigma = " << fmt17(c.effective_sigma()) << "\n";
    o << "init.mode = " << c.mode << "\n";
    o << "init.band = " << c.band << "\n";
    o << "init.decay = " << fmt17(c.decay) << "\n";
    if (!c.init_file.empty()) o << "init.file = " << c.init_file << "\n";
    o << "integrator.scheme = " << (c.scheme == Scheme::IFRK4 ? "ifrk4" : "rk4") << "\n";
    o << "integrator.dt = " << fmt17(c.dt) << "\n";
    o << "integrator.t-end = " << fmt17(c.t_end) << "\n";
    o << "integrator.dealias = " << (c.dealias == Dealias::TwoThirds ? "two-thirds" : "none")
      << "\n";
    o << "integrator.output-stride = " << c.output_stride << "\n";
    o << "diagnostics.monitors = " << (c.monitors ? "on" : "off") << "\n";
    o << "diagnostics.s = " << fmt17(c.effective_diag_s()) << "\n";
    o << "diagnostics.h0 = " << fmt17(c.h0) << "\n";
    o << "diagnostics.C1 = " << fmt17(c.C1) << "\n";
    o << "diagnostics.C2 = " << fmt17(c.C2) << "\n";
    o << "validation.period-return = " << (c.period_return ? "on" : "off") << "\n";
    o << "output.dir = " << c.output_dir << "\n";
    o << "seed = " << c.seed << "\n";
    return o.str();
}

// Every violated precondition is listed; an empty result means runnable.
inline std::vector<std::string> validate(const RunConfig& c) {
    std::vector<std::string> v;
    auto pow2 = [](std::size_t x) { return x >= 8 && is_power_of_two(x); };
    if (!pow2(c.n)) v.push_back("grid.n must be a power of two >= 8");
    if (c.is_2d() && !pow2(c.effective_n2())) v.push_back("grid.n2 must be a power of two >= 8");
    if (!(c.L > 0.0)) v.push_back("grid.L must be positive");
    if (c.is_2d() && !(c.effective_L2() > 0.0)) v.push_back("grid.L2 must be positive");
    if (c.model == ModelKind::Whitham1D) {
        if (c.beta < 0.0) v.push_back("beta must be >= 0 for whitham-1d");
    } else if (!(c.beta > 0.0)) {
        v.push_back("beta must be > 0 for the Boussinesq systems");
    }
    if (!(c.dt > 0.0)) v.push_back("integrator.dt must be positive");
    if (!(c.t_end > 0.0)) v.push_back("integrator.t-end must be positive");
    if (c.output_stride == 0) v.push_back("integrator.output-stride must be >= 1");
    const double steps = c.t_end / c.dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
        v.push_back("integrator.t-end must be an integer multiple of integrator.dt");
    const double s_eff = c.effective_diag_s();
    if (c.model == ModelKind::Boussinesq1D && c.monitors && !(s_eff > 2.5))
        v.push_back("diagnostics.s must exceed 5/2 for the 1D energy monitors");
    if (c.model == ModelKind::Boussinesq1D && !(s_eff > 2.0))
        v.push_back("s must exceed 2 for the 1D modified energy");
    if (c.model == ModelKind::Boussinesq2D && !(s_eff > 3.0))
        v.push_back("s must exceed 3 for the 2D diagnostics");
    if (c.h0 != 0.0 && !(c.h0 > 0.0 && c.h0 < 1.0))
        v.push_back("diagnostics.h0 must lie in (0,1), or 0 for automatic");
    if (!(c.C1 > 0.0)) v.push_back("diagnostics.C1 must be positive");
    if (!(c.C2 > 0.0)) v.push_back("diagnostics.C2 must be positive");
    if (c.family == InitFamily::Gaussian && !(c.effective_sigma() > 0.0))
        v.push_back("init.sigma must be positive");
    if (c.family == InitFamily::PlaneWave &&
        (c.mode < 1 || c.mode >= static_cast<long>(c.n / 2)))
        v.push_back("init.mode must lie in [1, n/2)");
    if (c.family == InitFamily::Random && c.band < 1) v.push_back("init.band must be >= 1");
    if (c.family == InitFamily::File && c.init_file.empty())
        v.push_back("init.file must name a snapshot file");
    if (!std::isfinite(c.amplitude)) v.push_back("init.amplitude must be finite");
    if (c.scheme == Scheme::RK4 && pow2(c.n) && c.L > 0.0 && c.dt > 0.0) {
        GridPtr g = c.is_2d() ? make_grid(c.n, c.effective_n2(), c.L, c.effective_L2())
                              : make_grid(c.n, c.L);
        double w = omega_max(*g, std::max(c.beta, 0.0));
        if (c.dt * w > 2.8)
            v.push_back("RK4 stability guard violated: dt*omega_max = " +
                        std::to_string(c.dt * w) + " > 2.8");
    }
    return v;
}

}  // namespace fdb
