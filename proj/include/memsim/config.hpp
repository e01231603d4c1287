#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "memsim/experiments.hpp"
#include "memsim/netlist.hpp"

namespace memsim {

/// Configuration or usage problem; maps to CLI exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimSettings {
    double dt = 1e-6;
    double duration = 120e-3;
    LoopMode mode = LoopMode::open_loop;
    OneShotSense oneshot_sense = OneShotSense::integrator_output;
    std::vector<std::string> probes = {"mod_hebb", "mod_inh", "u11", "u7"};
};

struct ExperimentSettings {
    std::vector<double> delta_ts;       // seconds; empty -> default grid
    std::vector<DaSetting> da_settings; // empty -> per-command default
    double da_delta_t = 2e-3;
    double conductance_duration = 1.0;
    double da_wiper_low = 0.25;
    double da_wiper_high = 1.0;
};

struct FullConfig {
    ComponentValues cv;
    ModStageConfig mod;
    NetlistTuning tuning;
    SomaConfig soma;
    MemristorState memristor;
    SimSettings sim;
    ExperimentSettings experiment;
    double spike_width = 100e-6;
    double spike_amplitude = 5.0;
    double t0 = 30e-3;

    ExperimentSetup setup() const;
};

/// Parse a TOML-syntax document (the subset described in the README:
/// tables, scalar keys, single- or multi-line arrays, # comments).
/// Omitted keys take their defaults; unknown keys, syntax errors and
/// constraint violations throw ConfigError with a line number.
FullConfig parse_config(const std::string& text);

} // namespace memsim
