#include "holodot/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <functional>
#include <limits>

namespace holodot {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view text) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ConfigError(fmt::format("key '{}': '{}' is not a finite number", key, text));
    }
    return v;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
    text = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError(fmt::format("key '{}': '{}' is not a non-negative integer", key, text));
    }
    return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
    text = trim(text);
    if (text == "true" || text == "on" || text == "1") return true;
    if (text == "false" || text == "off" || text == "0") return false;
    throw ConfigError(fmt::format("key '{}': '{}' is not a boolean (true/false)", key, text));
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
    std::vector<double> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(parse_real(key, text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

enum class Bound { open, closed };

double ranged(std::string_view key, std::string_view text, double lo, Bound lo_kind,
              double hi = std::numeric_limits<double>::infinity(), Bound hi_kind = Bound::closed) {
    const double v = parse_real(key, text);
    const bool lo_ok = lo_kind == Bound::open ? v > lo : v >= lo;
    const bool hi_ok = hi_kind == Bound::open ? v < hi : v <= hi;
    if (!lo_ok || !hi_ok) {
        throw ConfigError(fmt::format("key '{}': value {} outside {}{}, {}{}", key, v,
                                      lo_kind == Bound::open ? '(' : '[', lo, hi,
                                      hi_kind == Bound::open ? ')' : ']'));
    }
    return v;
}

std::string fmt_real(double v) { return fmt::format("{:.12g}", v); }

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt_real(v[i]);
    return s;
}

const char* to_string(QubitPreset p) {
    switch (p) {
        case QubitPreset::down: return "down";
        case QubitPreset::up: return "up";
        case QubitPreset::mixed: return "mixed";
    }
    return "unknown";
}

QubitPreset parse_preset(std::string_view key, std::string_view text) {
    text = trim(text);
    if (text == "down") return QubitPreset::down;
    if (text == "up") return QubitPreset::up;
    if (text == "mixed") return QubitPreset::mixed;
    throw ConfigError(fmt::format("key '{}': '{}' is not one of down, up, mixed", key, text));
}

GateVariant parse_variant(std::string_view key, std::string_view text) {
    text = trim(text);
    for (auto v : {GateVariant::y_single_pass, GateVariant::y_closed_loop, GateVariant::z_fractional,
                   GateVariant::x_composite}) {
        if (text == to_string(v)) return v;
    }
    throw ConfigError(fmt::format(
        "key '{}': '{}' is not one of y_single_pass, y_closed_loop, z_fractional, x_composite", key, text));
}

struct KeySpec {
    const char* name;
    const char* origin;  // documented provenance of the default
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

#define REAL_KEY(NAME, ORIGIN, FIELD, ...)                                                        \
    KeySpec {                                                                                     \
        NAME, ORIGIN, [](RunConfig& c, std::string_view v) { c.FIELD = ranged(NAME, v, __VA_ARGS__); }, \
            [](const RunConfig& c) { return fmt_real(c.FIELD); }                                  \
    }

const std::vector<KeySpec>& key_table() {
    static const std::vector<KeySpec> table{
        {"scenario", "validate",
         [](RunConfig& c, std::string_view v) { c.scenario = parse_scenario(trim(v)); },
         [](const RunConfig& c) { return std::string(to_string(c.scenario)); }},
        {"out_dir", "out",
         [](RunConfig& c, std::string_view v) {
             if (trim(v).empty()) throw ConfigError("key 'out_dir': empty path");
             c.out_dir = std::string(trim(v));
         },
         [](const RunConfig& c) { return c.out_dir; }},
        {"threads", "1",
         [](RunConfig& c, std::string_view v) {
             const auto n = parse_unsigned("threads", v);
             if (n < 1 || n > 256) throw ConfigError(fmt::format("key 'threads': value {} outside [1, 256]", n));
             c.threads = static_cast<unsigned>(n);
             c.gate.threads = c.threads;
         },
         [](const RunConfig& c) { return std::to_string(c.threads); }},
        {"seed", "0 (unrotated sphere rule)",
         [](RunConfig& c, std::string_view v) { c.seed = parse_unsigned("seed", v); },
         [](const RunConfig& c) { return std::to_string(c.seed); }},

        REAL_KEY("delta", "electron Zeeman splitting for B = 55 mT, g = -0.21 (rad/ps)", gate.model.delta, 0.0,
                 Bound::open, kInf, Bound::open),
        REAL_KEY("detuning_common", "exact resonance with e1 (rad/ps)", gate.model.detuning_common, -kInf,
                 Bound::open, kInf, Bound::open),
        REAL_KEY("gamma", "1/(2 gamma) = 800 ps recombination time (1/ps)", gate.model.gamma, 0.0, Bound::closed,
                 kInf, Bound::open),
        REAL_KEY("gamma_hh", "hole spin flip time 1 ms (1/ps)", gate.model.gamma_hh, 0.0, Bound::closed, kInf,
                 Bound::open),
        REAL_KEY("gamma_ee", "electron spin flip time 1 ms (1/ps)", gate.model.gamma_ee, 0.0, Bound::closed, kInf,
                 Bound::open),
        REAL_KEY("amp_p", "pump peak 0.5 rad/ps (Omega0 tau = 50)", gate.amps.pump, 0.0, Bound::open, kInf,
                 Bound::open),
        REAL_KEY("amp_s", "Stokes peak 0.5 rad/ps (Omega0 tau = 50)", gate.amps.stokes, 0.0, Bound::open, kInf,
                 Bound::open),
        REAL_KEY("amp_d", "driving peak 0.5 rad/ps (Omega0 tau = 50)", gate.amps.driving, 0.0, Bound::open, kInf,
                 Bound::open),
        REAL_KEY("tau", "pulse width 100 ps", gate.tau, 0.0, Bound::open, kInf, Bound::open),
        REAL_KEY("y_tau0_over_tau", "y-rotation delay 1.5 tau", gate.y_tau0_over_tau, 0.0, Bound::closed, 50.0),
        REAL_KEY("z_tau0_over_tau", "z-rotation delay 6.5 tau", gate.z_tau0_over_tau, 0.0, Bound::closed, 50.0),
        REAL_KEY("return_delay_over_tau", "closing pass delay 1 tau", gate.return_delay_over_tau, 0.0,
                 Bound::closed, 50.0),
        REAL_KEY("rotation_angle", "pi/2 (Stokes phase for z, angle for x)", gate.rotation_angle, -2 * kPi,
                 Bound::closed, 2 * kPi),
        REAL_KEY("target_beta", "pi/2 target of the y gates", gate.target_beta, -2 * kPi, Bound::closed, 2 * kPi),
        REAL_KEY("rel_tol", "1e-10", gate.rel_tol, 0.0, Bound::open, 1e-2),
        REAL_KEY("abs_tol", "1e-12", gate.abs_tol, 0.0, Bound::open, 1e-2),
        REAL_KEY("max_step_over_tau", "1/50", gate.max_step_over_tau, 0.0, Bound::open, 1.0),
        REAL_KEY("quad_accept_tol", "1e-6 rad", quad_accept_tol, 0.0, Bound::open, 1e-2),

        {"gate_variant", "y_closed_loop",
         [](RunConfig& c, std::string_view v) { c.gate_variant = parse_variant("gate_variant", v); },
         [](const RunConfig& c) { return std::string(to_string(c.gate_variant)); }},
        {"decoherence", "true",
         [](RunConfig& c, std::string_view v) { c.decoherence = parse_bool("decoherence", v); },
         [](const RunConfig& c) { return std::string(c.decoherence ? "true" : "false"); }},
        {"sweep_tau0_over_tau", "0 to 8 in steps of 0.5",
         [](RunConfig& c, std::string_view v) {
             auto list = parse_list("sweep_tau0_over_tau", v);
             for (std::size_t i = 0; i < list.size(); ++i) {
                 if (list[i] < 0.0 || list[i] > 50.0) {
                     throw ConfigError(fmt::format("key 'sweep_tau0_over_tau': value {} outside [0, 50]", list[i]));
                 }
                 if (i > 0 && !(list[i] > list[i - 1])) {
                     throw ConfigError("key 'sweep_tau0_over_tau': values must be strictly increasing");
                 }
             }
             c.sweep = std::move(list);
         },
         [](const RunConfig& c) { return fmt_list(c.sweep); }},

        {"init_polarization", "sigma_minus (prepares |1>)",
         [](RunConfig& c, std::string_view v) {
             v = trim(v);
             if (v == "sigma_minus") {
                 c.init_polarization = Polarization::sigma_minus;
             } else if (v == "sigma_plus") {
                 c.init_polarization = Polarization::sigma_plus;
             } else {
                 throw ConfigError(
                     fmt::format("key 'init_polarization': '{}' is not one of sigma_minus, sigma_plus", v));
             }
         },
         [](const RunConfig& c) {
             return std::string(c.init_polarization == Polarization::sigma_minus ? "sigma_minus" : "sigma_plus");
         }},
        {"init_state", "mixed (rho00 = rho11 = 0.5)",
         [](RunConfig& c, std::string_view v) { c.init_state = parse_preset("init_state", v); },
         [](const RunConfig& c) { return std::string(to_string(c.init_state)); }},
        REAL_KEY("init_rabi_over_gamma", "1.0", init_rabi_over_gamma, 0.0, Bound::closed, 1e6),
        REAL_KEY("init_duration", "20000 ps", init_duration, 0.0, Bound::open, 1e9),
        REAL_KEY("init_record_stride", "100 ps", init_record_stride, 0.0, Bound::open, 1e9),
        {"readout_state", "up",
         [](RunConfig& c, std::string_view v) { c.readout_state = parse_preset("readout_state", v); },
         [](const RunConfig& c) { return std::string(to_string(c.readout_state)); }},
        REAL_KEY("readout_rabi_over_gamma", "1.0", readout_rabi_over_gamma, 0.0, Bound::closed, 1e6),
        REAL_KEY("readout_duration", "40000 ps", readout_duration, 0.0, Bound::open, 1e9),
    };
    return table;
}

#undef REAL_KEY

const KeySpec& find_key(std::string_view key) {
    const auto& table = key_table();
    const auto it = std::find_if(table.begin(), table.end(), [&](const KeySpec& k) { return key == k.name; });
    if (it == table.end()) throw ConfigError(fmt::format("unknown key '{}'", key));
    return *it;
}

}  // namespace

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::init: return "init";
        case Scenario::sweep_beta: return "sweep-beta";
        case Scenario::sweep_gamma: return "sweep-gamma";
        case Scenario::gate: return "gate";
        case Scenario::readout: return "readout";
        case Scenario::validate: return "validate";
    }
    return "unknown";
}

Scenario parse_scenario(std::string_view name) {
    for (auto s : {Scenario::init, Scenario::sweep_beta, Scenario::sweep_gamma, Scenario::gate, Scenario::readout,
                   Scenario::validate}) {
        if (name == to_string(s)) return s;
    }
    throw ConfigError(fmt::format(
        "unknown scenario '{}' (expected init, sweep-beta, sweep-gamma, gate, readout or validate)", name));
}

RunConfig default_config() {
    RunConfig c;
    for (const auto& k : key_table()) c.sources[k.name] = fmt::format("default: {}", k.origin);
    return c;
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value, std::string source) {
    const KeySpec& spec = find_key(key);
    spec.set(cfg, value);
    cfg.sources[spec.name] = std::move(source);
}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg = default_config();
    std::map<std::string, int, std::less<>> seen;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(fmt::format("line {}: expected 'key = value', got '{}'", line_no, line));
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(fmt::format("line {}: missing key before '='", line_no));
        if (value.empty()) throw ConfigError(fmt::format("line {}: key '{}' has no value", line_no, key));
        if (auto it = seen.find(key); it != seen.end()) {
            throw ConfigError(fmt::format("line {}: key '{}' already set on line {}", line_no, key, it->second));
        }
        try {
            set_config_value(cfg, key, value, fmt::format("config line {}", line_no));
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("line {}: {}", line_no, e.what()));
        }
        seen.emplace(key, line_no);
    }
    return cfg;
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& k : key_table()) out.emplace_back(k.name, k.get(cfg));
    std::sort(out.begin(), out.end());
    return out;
}

Mat2 qubit_preset_state(QubitPreset p) {
    Mat2 m = Mat2::Zero();
    switch (p) {
        case QubitPreset::down: m(0, 0) = 1.0; break;
        case QubitPreset::up: m(1, 1) = 1.0; break;
        case QubitPreset::mixed: m(0, 0) = m(1, 1) = 0.5; break;
    }
    return m;
}

}  // namespace holodot
