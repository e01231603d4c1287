#pragma once

#include <string>

#include "memsim/config.hpp"

namespace memsim {

enum class Command {
    simulate,
    sweep_stdp,
    sweep_istdp,
    sweep_da_stdp,
    sweep_da_istdp,
    conductance,
    dump_netlist,
};

Command command_from_name(const std::string& name); // throws ConfigError

struct RunManifest {
    std::string config_path; // empty -> all defaults
    Command command = Command::simulate;
    std::string out_dir = ".";
    bool emit_svg = false;
    int jobs = 1;
};

/// Execute one command: parse the config, run the protocol, write the
/// output files into out_dir. Returns the paths written. Throws
/// ConfigError / std::invalid_argument for configuration problems and
/// std::runtime_error for runtime (I/O) failures.
std::vector<std::string> run_manifest(const RunManifest& manifest);

} // namespace memsim
