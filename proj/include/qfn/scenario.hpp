// scenario.hpp — scenario runner: config ingestion, dispatch to the owning
// module, deterministic CSV/JSON output layout, parameter sweeps, manifest.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfn/fock_master.hpp"
#include "qfn/network_params.hpp"
#include "qfn/pulses.hpp"

namespace qfn {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kOutputDirEnvVar = "QFEEDBACK_SIM_OUT";

enum class ScenarioKind { PulseResponse, Stability, Excitation, SteadyStateRun, Invert };

std::string to_string(ScenarioKind kind);

struct GridSettings {
    std::optional<double> t_start;
    std::optional<double> t_end;
    std::optional<double> dt;
};

struct SweepSettings {
    std::string key;  // a params key, "pulse.<field>", or "t_terminal"
    std::vector<double> values;
};

struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::Stability;
    NetworkParams params;
    std::optional<PulseSpec> pulse;  // empty means vacuum where allowed
    GridSettings grid;
    InitialState initial_state = InitialState::G1G20;
    double t_terminal = 0.0;       // invert
    double post_terminal = 0.0;    // invert: extension past the terminal time
    int n_cav = 2;
    double extension_cap = 10.0;   // pulse_response grid extension factor
    std::optional<SweepSettings> sweep;
    std::string output_dir;        // may be overridden by the caller
    nlohmann::json raw;            // the validated source object
};

// Full validation pass: every problem is collected and reported together in
// a ConfigError; nothing is applied on failure.
ScenarioConfig validate_config(const nlohmann::json& raw);

struct RunManifest {
    nlohmann::json config_echo;
    std::string version;
    std::vector<std::string> output_files;  // relative to output_dir
    nlohmann::json checksums;               // file -> fnv1a64
    double wall_seconds = 0.0;
    int workers = 1;

    nlohmann::json to_json() const;
};

// Runs the scenario (all sweep points when a sweep block is present), writes
// CSVs, per-run summary JSONs, and manifest.json under output_dir.
RunManifest run(const ScenarioConfig& config, const std::string& output_dir,
                int workers = 1);

}  // namespace qfn
