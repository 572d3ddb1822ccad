#ifndef RABIPISTON_PARAMS_HPP
#define RABIPISTON_PARAMS_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rabipiston/errors.hpp"

namespace rabipiston {

/// Run parameters in condensate units: length l, energy eps = hbar^2/(m l^2),
/// time tau = m l^2/hbar, pressure rho = N hbar^2/(m l^3). The wavefunction is
/// normalized to one; the particle number is absorbed into the couplings, so
/// g_s here is the total interaction strength g_s*N in units eps*l.
struct SystemParams {
    double g_s = 5.0;           // self-interaction strength, eps*l
    double g_c = 0.0;           // cross-interaction strength, eps*l
    double delta = 5.0;         // Rabi strength, 1/tau
    double mass_ratio = 1000.0; // piston-to-condensate mass ratio mu = M/(Nm)
    double spring_k = 1.05;     // spring constant kappa = k*l/rho
    double v_left = 100.0;      // left-wall height, eps
    double v_piston = 10.0;     // piston-barrier height, eps
    double slope_s = 0.01;      // wall ramp half-width s, l
    double x_min = -2.0;        // domain lower edge, l
    double x_max = 6.0;         // domain upper edge, l
    int n_points = 4096;        // grid points (power of two)
    double dt_real = 2.5e-4;    // real-time step, tau
    double dt_imag = 1.0e-3;    // imaginary-time step, tau

    double domain_length() const { return x_max - x_min; }
    double grid_spacing() const { return domain_length() / n_points; }
    /// Piston oscillator frequency, Omega = sqrt(kappa/mu) in 1/tau.
    double omega() const { return std::sqrt(spring_k / mass_ratio); }

    void validate() const;
    std::string serialize() const;
};

namespace detail {

inline bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& key, const std::string& text) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ValidationError("key '" + key + "': cannot parse '" + text + "' as a number");
    }
    if (pos != text.size())
        throw ValidationError("key '" + key + "': trailing characters in '" + text + "'");
    return v;
}

inline std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline void SystemParams::validate() const {
    auto fail = [](const std::string& key, const std::string& why) {
        throw ValidationError("parameter '" + key + "' invalid: " + why);
    };
    if (!(g_s >= 0)) fail("g_s", "must be >= 0");
    if (!(g_c >= 0)) fail("g_c", "must be >= 0");
    if (!(delta >= 0)) fail("delta", "must be >= 0");
    if (!(mass_ratio > 0)) fail("mass_ratio", "must be > 0");
    if (!(spring_k > 0)) fail("spring_k", "must be > 0");
    if (!(v_piston > 0)) fail("v_piston", "must be > 0");
    if (!(v_left > v_piston)) fail("v_left", "must exceed v_piston");
    if (!(slope_s > 0)) fail("slope_s", "must be > 0");
    if (!(x_max > x_min)) fail("domain", "x_max must exceed x_min");
    if (!detail::is_power_of_two(n_points)) fail("n_points", "must be a power of two");
    if (!(slope_s >= 4.0 * grid_spacing()))
        fail("slope_s", "ramp must span at least 4 grid points (s >= 4*dx)");
    if (!(dt_real > 0)) fail("dt_real", "must be > 0");
    if (!(dt_imag > 0)) fail("dt_imag", "must be > 0");
}

/// Applies one `key = value` override. Throws ValidationError for unknown keys
/// or malformed values; does not re-validate the whole struct.
inline void apply_override(SystemParams& p, const std::string& key, const std::string& value) {
    using detail::parse_real;
    if (key == "g_s") p.g_s = parse_real(key, value);
    else if (key == "g_c") p.g_c = parse_real(key, value);
    else if (key == "delta") p.delta = parse_real(key, value);
    else if (key == "mass_ratio") p.mass_ratio = parse_real(key, value);
    else if (key == "spring_k") p.spring_k = parse_real(key, value);
    else if (key == "v_left") p.v_left = parse_real(key, value);
    else if (key == "v_piston") p.v_piston = parse_real(key, value);
    else if (key == "slope_s") p.slope_s = parse_real(key, value);
    else if (key == "dt_real") p.dt_real = parse_real(key, value);
    else if (key == "dt_imag") p.dt_imag = parse_real(key, value);
    else if (key == "n_points") {
        const double v = parse_real(key, value);
        if (v != std::floor(v)) throw ValidationError("parameter 'n_points' invalid: not an integer");
        p.n_points = static_cast<int>(v);
    } else if (key == "domain") {
        std::istringstream iss(value);
        double lo = 0, hi = 0;
        std::string rest;
        if (!(iss >> lo >> hi) || (iss >> rest))
            throw ValidationError("key 'domain': expected two numbers, got '" + value + "'");
        p.x_min = lo;
        p.x_max = hi;
    } else {
        throw ValidationError("unknown configuration key '" + key + "'");
    }
}

/// Parses the line-oriented `key = value` format (# starts a comment).
inline SystemParams parse_config(std::istream& in, const std::string& origin = "<stream>") {
    SystemParams p;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = detail::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ValidationError(origin + ":" + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + body + "'");
        const std::string key = detail::trim(body.substr(0, eq));
        const std::string value = detail::trim(body.substr(eq + 1));
        if (key.empty())
            throw ValidationError(origin + ":" + std::to_string(lineno) + ": empty key");
        apply_override(p, key, value);
    }
    p.validate();
    return p;
}

inline SystemParams load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

inline std::string SystemParams::serialize() const {
    using detail::fmt_full;
    std::ostringstream os;
    os << "g_s = " << fmt_full(g_s) << "\n";
    os << "g_c = " << fmt_full(g_c) << "\n";
    os << "delta = " << fmt_full(delta) << "\n";
    os << "mass_ratio = " << fmt_full(mass_ratio) << "\n";
    os << "spring_k = " << fmt_full(spring_k) << "\n";
    os << "v_left = " << fmt_full(v_left) << "\n";
    os << "v_piston = " << fmt_full(v_piston) << "\n";
    os << "slope_s = " << fmt_full(slope_s) << "\n";
    os << "domain = " << fmt_full(x_min) << " " << fmt_full(x_max) << "\n";
    os << "n_points = " << n_points << "\n";
    os << "dt_real = " << fmt_full(dt_real) << "\n";
    os << "dt_imag = " << fmt_full(dt_imag) << "\n";
    return os.str();
}

inline void save_config(const SystemParams& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write config file '" + path + "'");
    out << p.serialize();
}

}  // namespace rabipiston

#endif
