#pragma once

#include <map>
#include <string>
#include <vector>

#include "memsim/netlist.hpp"
#include "memsim/signal.hpp"

namespace memsim {

struct SimConfig {
    TimeGrid grid;
    std::vector<std::string> probes;
    unsigned long long seed = 0; // reserved; all current blocks are deterministic
};

struct SimResult {
    std::map<std::string, Trace> traces;                          // one per probe
    std::map<std::string, std::map<std::string, double>> final_states;
};

/// Deterministic evaluation order over the undelayed edges. Ties break
/// lexicographically by node id. Throws on an unflagged cycle.
std::vector<std::string> topo_order(const NeuronNetlist& netlist);

/// Fixed-step synchronous dataflow run. Forward edges read the current
/// step, delayed edges the previous step. Bit-exact reproducible.
SimResult run(const NeuronNetlist& netlist, const SimConfig& cfg);

} // namespace memsim
