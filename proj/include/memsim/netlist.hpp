#pragma once

#include <map>
#include <string>
#include <vector>

#include "memsim/blocks.hpp"
#include "memsim/signal.hpp"

namespace memsim {

enum class BlockKind {
    generator,
    integrator,
    one_shot,
    inv_adder,
    controlled_inverter,
    adder_integrator,
    key_latch,
    mod_stage,
    memristor,
    soma,
};

std::string block_kind_name(BlockKind k);
BlockKind block_kind_from_name(const std::string& name);

/// True for the stages built around an integrating op-amp
/// (integrator, adder_integrator).
bool is_integrator_class(BlockKind k);

/// One behavioral stage of the schematic. Numeric parameters are kept
/// in a sorted map so dumps and comparisons are deterministic.
struct BlockSpec {
    std::string id;
    BlockKind kind = BlockKind::generator;
    std::map<std::string, double> params;

    bool operator==(const BlockSpec&) const = default;
};

struct Edge {
    std::string src;
    std::string dst;
    std::string port;
    bool delayed = false; // feedback edges carry a one-step delay

    bool operator==(const Edge&) const = default;
};

enum class LoopMode { open_loop, closed_loop };
enum class OneShotSense { integrator_output, memristor_node };

/// Soma realized as a leaky integrate-and-fire stage.
struct SomaConfig {
    double tau_mem = 10e-3;      // seconds
    double v_threshold = 1.0;    // volts
    double v_reset = 0.0;        // volts
    double refractory = 2e-3;    // seconds, >= spike_width
    double spike_width = 100e-6; // seconds
    double spike_amplitude = 5.0; // volts
    double c_norm = 1e-9;        // farads-equivalent current normalization

    void validate() const;
};

/// Stage constants that are not discrete schematic components: adder
/// gains, the output and inhibitory integrator time constants, and the
/// Q1 key-latch dynamics.
struct NetlistTuning {
    double adder_gain = 20.0;     // U9 per-input gain
    double tau_output = 0.2e-3;   // U11
    double tau_inhibitor = 5e-3;  // U7
    double tau_key = 2e-3;        // Q1 gate-charge latch
    double key_threshold = 0.1;   // volts, U10 control threshold
    double oneshot_v_high = 5.0;  // volts
    double inhibitor_bias = -5.0; // volts, U7 input offset (coincidence bias)

    void validate() const;
};

struct NeuronNetlist {
    std::vector<BlockSpec> nodes;
    std::vector<Edge> edges;
    LoopMode mode = LoopMode::open_loop;
    OneShotSense oneshot_sense = OneShotSense::integrator_output;
    std::map<std::string, SpikeTrain> trains; // generator id -> stimulus

    const BlockSpec* find(const std::string& id) const;

    /// Structural checks: unique ids, known ports, single driver per
    /// port, connectivity, undelayed acyclicity, mode requirements.
    /// Throws std::invalid_argument on violation.
    void validate() const;

    bool operator==(const NeuronNetlist&) const = default;
};

/// Canonical Fig-style topology. Open loop wires external Tpre/Tpost
/// generators; closed loop replaces the Tpost generator with a soma fed
/// by a memristive excitatory synapse and the inhibitory output, with a
/// single one-step-delayed feedback edge.
NeuronNetlist build_standard_netlist(const ComponentValues& cv,
                                     const ModStageConfig& mod_cfg,
                                     LoopMode mode,
                                     const NetlistTuning& tuning = {},
                                     const SomaConfig& soma = {},
                                     OneShotSense sense = OneShotSense::integrator_output);

struct SomaState {
    double v = 0.0;              // volts, membrane
    double refractory_left = 0.0; // seconds
    double spike_left = 0.0;      // seconds of output pulse remaining
};

struct SomaStepResult {
    SomaState state;
    bool spike = false;
    double y = 0.0; // output pulse voltage
};

/// Leaky integrate-and-fire update. No integration while refractory.
SomaStepResult soma_step(const SomaState& state, double i_exc, double i_inh, double dt,
                         const SomaConfig& cfg);

} // namespace memsim
