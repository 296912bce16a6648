#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sirtax/initial.hpp"
#include "sirtax/kinetics.hpp"
#include "sirtax/stepper.hpp"

namespace sirtax {

enum class RunMode { single, figure1_pair, eps_continuation, positivity_1d, mms };

inline const char* run_mode_name(RunMode m) {
    switch (m) {
        case RunMode::single: return "single";
        case RunMode::figure1_pair: return "figure1-pair";
        case RunMode::eps_continuation: return "eps-continuation";
        case RunMode::positivity_1d: return "positivity-1d";
        case RunMode::mms: return "mms";
    }
    return "single";
}

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Full description of one CLI invocation. Defaults reproduce the reference
/// scenario: 65x65 nodes on [0,10]^2, three infection seeds, K=15, t_end=10.
struct RunConfig {
    RunMode mode = RunMode::single;
    int dim = 2;
    std::array<double, 2> extent = {10.0, 10.0};
    std::array<int, 2> nodes = {65, 65};
    InitialConditionSpec ic = default_initial_conditions();
    ModelParams params;
    StepControl control;
    double t_end = 10.0;
    std::vector<double> sample_times = {0.0, 2.5, 5.0, 10.0};
    std::vector<double> eps_list = {0.5, 0.25, 0.125, 0.0625, 0.0};
    double positivity_s_floor = 0.2;
    int hats_per_axis = 5;
    std::vector<int> mms_nodes = {33, 65, 129};
    std::string out_dir = "out";

    bool operator==(const RunConfig&) const = default;
};

inline Grid grid_from_config(const RunConfig& c) {
    return build_grid(c.dim, c.extent, c.nodes);
}

namespace detail {

inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline double parse_number(const std::string& tok, const std::string& key, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || tok.empty())
        throw ConfigError(where + ": key '" + key + "': expected a number, got '" + tok + "'");
    return v;
}

inline int parse_int(const std::string& tok, const std::string& key, const std::string& where) {
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size() || tok.empty())
        throw ConfigError(where + ": key '" + key + "': expected an integer, got '" + tok + "'");
    return static_cast<int>(v);
}

inline std::vector<double> parse_numbers(const std::vector<std::string>& toks,
                                         const std::string& key, const std::string& where) {
    std::vector<double> out;
    for (const auto& t : toks) out.push_back(parse_number(t, key, where));
    return out;
}

/// Staging for the bump arrays, which may arrive in any key order.
struct IcStaging {
    bool touched = false;
    std::vector<double> amplitudes;
    std::vector<double> centers_flat;
    std::vector<double> sigmas;
};

inline void apply_key(RunConfig& c, IcStaging& ic, const std::string& key,
                      const std::string& value, const std::string& where) {
    const std::vector<std::string> toks = split_ws(value);
    auto single = [&]() -> const std::string& {
        if (toks.size() != 1)
            throw ConfigError(where + ": key '" + key + "' takes exactly one value");
        return toks[0];
    };

    if (key == "mode") {
        const std::string& m = single();
        if (m == "single") c.mode = RunMode::single;
        else if (m == "figure1-pair") c.mode = RunMode::figure1_pair;
        else if (m == "eps-continuation") c.mode = RunMode::eps_continuation;
        else if (m == "positivity-1d") c.mode = RunMode::positivity_1d;
        else if (m == "mms") c.mode = RunMode::mms;
        else throw ConfigError(where + ": key 'mode': unknown mode '" + m + "'");
    } else if (key == "grid.dim") {
        c.dim = parse_int(single(), key, where);
        if (c.dim != 1 && c.dim != 2)
            throw ConfigError(where + ": key 'grid.dim': must be 1 or 2");
    } else if (key == "grid.extent") {
        const auto v = parse_numbers(toks, key, where);
        if (v.size() == 1) c.extent = {v[0], v[0]};
        else if (v.size() == 2) c.extent = {v[0], v[1]};
        else throw ConfigError(where + ": key 'grid.extent' takes one or two values");
    } else if (key == "grid.nodes") {
        if (toks.size() == 1) {
            const int n = parse_int(toks[0], key, where);
            c.nodes = {n, n};
        } else if (toks.size() == 2) {
            c.nodes = {parse_int(toks[0], key, where), parse_int(toks[1], key, where)};
        } else {
            throw ConfigError(where + ": key 'grid.nodes' takes one or two values");
        }
    } else if (key == "ic.amplitudes") {
        ic.touched = true;
        ic.amplitudes = parse_numbers(toks, key, where);
    } else if (key == "ic.centers") {
        ic.touched = true;
        ic.centers_flat = parse_numbers(toks, key, where);
    } else if (key == "ic.sigma") {
        ic.touched = true;
        ic.sigmas = parse_numbers(toks, key, where);
    } else if (key == "params.K") {
        c.params.K = parse_number(single(), key, where);
    } else if (key == "params.lambda_S") {
        c.params.lambda_S = parse_number(single(), key, where);
    } else if (key == "params.lambda_I") {
        c.params.lambda_I = parse_number(single(), key, where);
    } else if (key == "params.mu_S") {
        c.params.mu_S = parse_number(single(), key, where);
    } else if (key == "params.mu_I") {
        c.params.mu_I = parse_number(single(), key, where);
    } else if (key == "params.eps") {
        c.params.eps_reg = parse_number(single(), key, where);
    } else if (key == "params.chi_law") {
        const std::string& m = single();
        if (m == "crowding") c.params.chi_law = ChiLaw::crowding;
        else if (m == "constant") c.params.chi_law = ChiLaw::constant_chi;
        else throw ConfigError(where + ": key 'params.chi_law': expected crowding|constant");
    } else if (key == "control.safety") {
        c.control.safety = parse_number(single(), key, where);
    } else if (key == "control.dt_max") {
        c.control.dt_max = parse_number(single(), key, where);
    } else if (key == "control.clamping") {
        const std::string& m = single();
        if (m == "on") c.control.clamping = true;
        else if (m == "off") c.control.clamping = false;
        else throw ConfigError(where + ": key 'control.clamping': expected on|off");
    } else if (key == "t_end") {
        c.t_end = parse_number(single(), key, where);
    } else if (key == "sample_times") {
        c.sample_times = parse_numbers(toks, key, where);
    } else if (key == "eps_list") {
        c.eps_list = parse_numbers(toks, key, where);
    } else if (key == "positivity.s_floor") {
        c.positivity_s_floor = parse_number(single(), key, where);
    } else if (key == "diagnostics.hats_per_axis") {
        c.hats_per_axis = parse_int(single(), key, where);
    } else if (key == "mms.nodes") {
        c.mms_nodes.clear();
        for (const auto& t : toks) c.mms_nodes.push_back(parse_int(t, key, where));
    } else if (key == "out_dir") {
        if (toks.empty())
            throw ConfigError(where + ": key 'out_dir': value must not be empty");
        c.out_dir = trim(value);
    } else {
        throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

inline void assemble_ic(RunConfig& c, const IcStaging& ic, const std::string& where) {
    if (!ic.touched) return;
    const std::size_t n = ic.amplitudes.size();
    if (ic.centers_flat.size() != n * static_cast<std::size_t>(c.dim))
        throw ConfigError(where + ": 'ic.centers' needs dim x (number of amplitudes) values (" +
                          std::to_string(n * c.dim) + "), got " +
                          std::to_string(ic.centers_flat.size()));
    if (!(ic.sigmas.empty() || ic.sigmas.size() == 1 || ic.sigmas.size() == n))
        throw ConfigError(where + ": 'ic.sigma' takes one shared value or one per bump");
    c.ic.bumps.clear();
    for (std::size_t b = 0; b < n; ++b) {
        GaussianBump bump;
        bump.amplitude = ic.amplitudes[b];
        bump.center[0] = ic.centers_flat[b * c.dim];
        bump.center[1] = c.dim == 2 ? ic.centers_flat[b * c.dim + 1] : 0.0;
        bump.sigma = ic.sigmas.empty() ? 0.25 : (ic.sigmas.size() == 1 ? ic.sigmas[0] : ic.sigmas[b]);
        c.ic.bumps.push_back(bump);
    }
}

/// Seeds the bump staging from the bumps a config already carries, so ic keys
/// replace only what they name. A uniform width collapses to one shared entry
/// so the bump count may change without restating sigma.
inline IcStaging seed_staging(const RunConfig& c) {
    IcStaging ic;
    for (const GaussianBump& b : c.ic.bumps) {
        ic.amplitudes.push_back(b.amplitude);
        ic.centers_flat.push_back(b.center[0]);
        if (c.dim == 2) ic.centers_flat.push_back(b.center[1]);
        ic.sigmas.push_back(b.sigma);
    }
    if (!ic.sigmas.empty() &&
        std::all_of(ic.sigmas.begin(), ic.sigmas.end(),
                    [&](double s) { return s == ic.sigmas.front(); }))
        ic.sigmas.resize(1);
    return ic;
}

/// In 1D the second axis and bump y-coordinates are meaningless; pin them to
/// canonical values so emit/parse round-trips exactly.
inline void canonicalize(RunConfig& c) {
    if (c.dim == 1) {
        c.extent[1] = c.extent[0];
        c.nodes[1] = c.nodes[0];
        for (GaussianBump& b : c.ic.bumps) b.center[1] = 0.0;
    }
}

} // namespace detail

/// Validates every cross-field invariant; throws ConfigError naming the key.
inline void validate_config(const RunConfig& c) {
    auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
    if (c.dim != 1 && c.dim != 2) fail("'grid.dim' must be 1 or 2");
    for (int d = 0; d < c.dim; ++d) {
        if (c.nodes[d] < 3) fail("'grid.nodes' must be at least 3 per axis");
        if (!(c.extent[d] > 0.0)) fail("'grid.extent' must be positive");
    }
    try {
        validate_initial_spec(c.ic);
        validate_params(c.params);
        validate_control(c.control);
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    if (c.t_end < 0.0) fail("'t_end' must be nonnegative");
    for (std::size_t k = 0; k < c.sample_times.size(); ++k) {
        if (c.sample_times[k] < 0.0 || c.sample_times[k] > c.t_end)
            fail("'sample_times' must lie within [0, t_end]");
        if (k > 0 && !(c.sample_times[k] > c.sample_times[k - 1]))
            fail("'sample_times' must be strictly increasing");
    }
    for (std::size_t k = 0; k < c.eps_list.size(); ++k) {
        if (c.eps_list[k] < 0.0 || c.eps_list[k] > 1.0) fail("'eps_list' values must lie in [0,1]");
        if (k > 0 && !(c.eps_list[k] < c.eps_list[k - 1]))
            fail("'eps_list' must be strictly decreasing");
    }
    if (!(c.positivity_s_floor > 0.0) || c.positivity_s_floor >= 1.0)
        fail("'positivity.s_floor' must lie in (0,1)");
    if (c.hats_per_axis < 0) fail("'diagnostics.hats_per_axis' must be nonnegative");
    for (int n : c.mms_nodes)
        if (n < 3) fail("'mms.nodes' entries must be at least 3");
    if (c.out_dir.empty()) fail("'out_dir' must not be empty");
    if (c.mode == RunMode::positivity_1d && c.dim != 1)
        fail("mode positivity-1d requires grid.dim = 1");
}

/// Parses the key-value config text. Lines are 'key = value(s)', '#' starts a
/// comment, unspecified keys keep their defaults. Errors carry the line number
/// and key path.
inline RunConfig parse_config(const std::string& text) {
    RunConfig c;
    detail::IcStaging ic = detail::seed_staging(c);

    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string where = "line " + std::to_string(lineno);
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": missing key before '='");
        detail::apply_key(c, ic, key, value, where);
    }
    detail::assemble_ic(c, ic, "config");
    detail::canonicalize(c);
    validate_config(c);
    return c;
}

/// Applies 'key=value' overrides on top of a parsed config as one batch, so
/// coupled changes (say grid.dim together with new ic.centers) can be issued
/// jointly; revalidates afterwards.
inline void apply_overrides(RunConfig& c, const std::vector<std::string>& overrides) {
    detail::IcStaging ic = detail::seed_staging(c);
    for (const std::string& key_eq_value : overrides) {
        const std::size_t eq = key_eq_value.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + key_eq_value + "': expected key=value");
        const std::string key = detail::trim(key_eq_value.substr(0, eq));
        const std::string value = detail::trim(key_eq_value.substr(eq + 1));
        detail::apply_key(c, ic, key, value, "override '" + key_eq_value + "'");
    }
    detail::assemble_ic(c, ic, "overrides");
    detail::canonicalize(c);
    validate_config(c);
}

inline void apply_override(RunConfig& c, const std::string& key_eq_value) {
    apply_overrides(c, {key_eq_value});
}

/// Emits the effective config in the parse_config schema; numeric values use
/// 17 significant digits so parse(emit(c)) == c exactly.
inline std::string emit_config(const RunConfig& c) {
    using detail::fmt_g17;
    std::ostringstream os;
    auto list = [&](const char* key, const std::vector<double>& v) {
        os << key << " =";
        for (double x : v) os << ' ' << fmt_g17(x);
        os << '\n';
    };
    os << "mode = " << run_mode_name(c.mode) << '\n';
    os << "grid.dim = " << c.dim << '\n';
    os << "grid.extent =";
    for (int d = 0; d < c.dim; ++d) os << ' ' << fmt_g17(c.extent[d]);
    os << '\n';
    os << "grid.nodes =";
    for (int d = 0; d < c.dim; ++d) os << ' ' << c.nodes[d];
    os << '\n';
    os << "ic.amplitudes =";
    for (const auto& b : c.ic.bumps) os << ' ' << fmt_g17(b.amplitude);
    os << '\n';
    os << "ic.centers =";
    for (const auto& b : c.ic.bumps) {
        os << ' ' << fmt_g17(b.center[0]);
        if (c.dim == 2) os << ' ' << fmt_g17(b.center[1]);
    }
    os << '\n';
    os << "ic.sigma =";
    for (const auto& b : c.ic.bumps) os << ' ' << fmt_g17(b.sigma);
    os << '\n';
    os << "params.K = " << fmt_g17(c.params.K) << '\n';
    os << "params.lambda_S = " << fmt_g17(c.params.lambda_S) << '\n';
    os << "params.lambda_I = " << fmt_g17(c.params.lambda_I) << '\n';
    os << "params.mu_S = " << fmt_g17(c.params.mu_S) << '\n';
    os << "params.mu_I = " << fmt_g17(c.params.mu_I) << '\n';
    os << "params.eps = " << fmt_g17(c.params.eps_reg) << '\n';
    os << "params.chi_law = "
       << (c.params.chi_law == ChiLaw::crowding ? "crowding" : "constant") << '\n';
    os << "control.safety = " << fmt_g17(c.control.safety) << '\n';
    os << "control.dt_max = " << fmt_g17(c.control.dt_max) << '\n';
    os << "control.clamping = " << (c.control.clamping ? "on" : "off") << '\n';
    os << "t_end = " << fmt_g17(c.t_end) << '\n';
    list("sample_times", c.sample_times);
    list("eps_list", c.eps_list);
    os << "positivity.s_floor = " << fmt_g17(c.positivity_s_floor) << '\n';
    os << "diagnostics.hats_per_axis = " << c.hats_per_axis << '\n';
    os << "mms.nodes =";
    for (int n : c.mms_nodes) os << ' ' << n;
    os << '\n';
    os << "out_dir = " << c.out_dir << '\n';
    return os.str();
}

} // namespace sirtax
