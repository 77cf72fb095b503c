#pragma once

// Run configuration: flat "key = value" text, '#' starts a comment.
// Lists are comma separated. Every key has a default; the source of each
// resolved value is kept for the manifest.

#include "holodot/scenarios.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace holodot {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Scenario { init, sweep_beta, sweep_gamma, gate, readout, validate };

const char* to_string(Scenario s);
Scenario parse_scenario(std::string_view name);

/// Qubit state names accepted by init_state / readout_state.
enum class QubitPreset { down, up, mixed };

struct RunConfig {
    Scenario scenario = Scenario::validate;
    std::string out_dir = "out";
    unsigned threads = 1;
    std::uint64_t seed = 0;

    GateParams gate;  // model, amplitudes, tau, delays, tolerances
    GateVariant gate_variant = GateVariant::y_closed_loop;
    bool decoherence = true;
    double quad_accept_tol = 1e-6;

    std::vector<double> sweep{0, 0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4, 4.5, 5, 5.5, 6, 6.5, 7, 7.5, 8};

    Polarization init_polarization = Polarization::sigma_minus;
    QubitPreset init_state = QubitPreset::mixed;
    double init_rabi_over_gamma = 1.0;
    double init_duration = 20000.0;  // ps
    double init_record_stride = 100.0;

    QubitPreset readout_state = QubitPreset::up;
    double readout_rabi_over_gamma = 1.0;
    double readout_duration = 40000.0;  // ps

    /// key -> where the value came from ("default (...)", "config line N", "command line").
    std::map<std::string, std::string> sources;
};

/// Defaults for every key, sources filled in.
RunConfig default_config();

/// Throws ConfigError naming the key (and line) on unknown keys, bad values,
/// out-of-range values or malformed lines.
RunConfig parse_config(std::string_view text);

/// Sets one key from its textual value; throws ConfigError.
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value, std::string source);

/// Resolved (key, value) pairs in key order.
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg);

Mat2 qubit_preset_state(QubitPreset p);

}  // namespace holodot
