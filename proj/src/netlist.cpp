#include "memsim/netlist.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace memsim {

std::string block_kind_name(BlockKind k) {
    switch (k) {
    case BlockKind::generator: return "generator";
    case BlockKind::integrator: return "integrator";
    case BlockKind::one_shot: return "one_shot";
    case BlockKind::inv_adder: return "inv_adder";
    case BlockKind::controlled_inverter: return "controlled_inverter";
    case BlockKind::adder_integrator: return "adder_integrator";
    case BlockKind::key_latch: return "key_latch";
    case BlockKind::mod_stage: return "mod_stage";
    case BlockKind::memristor: return "memristor";
    case BlockKind::soma: return "soma";
    }
    throw std::invalid_argument("block_kind_name: unknown kind");
}

BlockKind block_kind_from_name(const std::string& name) {
    static const std::map<std::string, BlockKind> table = {
        {"generator", BlockKind::generator},
        {"integrator", BlockKind::integrator},
        {"one_shot", BlockKind::one_shot},
        {"inv_adder", BlockKind::inv_adder},
        {"controlled_inverter", BlockKind::controlled_inverter},
        {"adder_integrator", BlockKind::adder_integrator},
        {"key_latch", BlockKind::key_latch},
        {"mod_stage", BlockKind::mod_stage},
        {"memristor", BlockKind::memristor},
        {"soma", BlockKind::soma},
    };
    auto it = table.find(name);
    if (it == table.end())
        throw std::invalid_argument("unknown block kind: " + name);
    return it->second;
}

bool is_integrator_class(BlockKind k) {
    return k == BlockKind::integrator || k == BlockKind::adder_integrator;
}

void SomaConfig::validate() const {
    if (!(tau_mem > 0.0)) throw std::invalid_argument("SomaConfig: tau_mem must be positive");
    if (!(spike_width > 0.0))
        throw std::invalid_argument("SomaConfig: spike_width must be positive");
    if (!(refractory >= spike_width))
        throw std::invalid_argument("SomaConfig: refractory must be >= spike_width");
    if (!(c_norm > 0.0)) throw std::invalid_argument("SomaConfig: c_norm must be positive");
}

void NetlistTuning::validate() const {
    if (!(adder_gain != 0.0)) throw std::invalid_argument("NetlistTuning: adder_gain must be nonzero");
    if (!(tau_output > 0.0)) throw std::invalid_argument("NetlistTuning: tau_output must be positive");
    if (!(tau_inhibitor > 0.0))
        throw std::invalid_argument("NetlistTuning: tau_inhibitor must be positive");
    if (!(tau_key > 0.0)) throw std::invalid_argument("NetlistTuning: tau_key must be positive");
    if (!(key_threshold > 0.0))
        throw std::invalid_argument("NetlistTuning: key_threshold must be positive");
    if (!(oneshot_v_high > 0.0))
        throw std::invalid_argument("NetlistTuning: oneshot_v_high must be positive");
}

namespace {

// Input ports a node kind expects. inv_adder ports follow its gain count.
std::vector<std::string> required_ports(const BlockSpec& node) {
    switch (node.kind) {
    case BlockKind::generator: return {};
    case BlockKind::integrator:
    case BlockKind::one_shot:
    case BlockKind::mod_stage: return {"in"};
    case BlockKind::controlled_inverter: return {"in", "ctrl"};
    case BlockKind::adder_integrator:
    case BlockKind::key_latch: return {"in0", "in1"};
    case BlockKind::memristor: return {"drive", "read"};
    case BlockKind::soma: return {"exc", "inh"};
    case BlockKind::inv_adder: {
        std::vector<std::string> ports;
        for (std::size_t i = 0;; ++i) {
            if (!node.params.count("gain" + std::to_string(i))) break;
            ports.push_back("in" + std::to_string(i));
        }
        if (ports.empty())
            throw std::invalid_argument("inv_adder '" + node.id + "' has no gains");
        return ports;
    }
    }
    throw std::invalid_argument("required_ports: unknown kind");
}

} // namespace

const BlockSpec* NeuronNetlist::find(const std::string& id) const {
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

void NeuronNetlist::validate() const {
    std::set<std::string> ids;
    for (const auto& n : nodes) {
        if (n.id.empty()) throw std::invalid_argument("netlist: empty node id");
        if (!ids.insert(n.id).second)
            throw std::invalid_argument("netlist: duplicate node id '" + n.id + "'");
    }
    std::map<std::string, std::set<std::string>> driven; // dst -> ports
    for (const auto& e : edges) {
        const BlockSpec* src = find(e.src);
        const BlockSpec* dst = find(e.dst);
        if (!src) throw std::invalid_argument("netlist: edge from unknown node '" + e.src + "'");
        if (!dst) throw std::invalid_argument("netlist: edge to unknown node '" + e.dst + "'");
        auto ports = required_ports(*dst);
        if (std::find(ports.begin(), ports.end(), e.port) == ports.end())
            throw std::invalid_argument("netlist: node '" + e.dst + "' has no port '" +
                                        e.port + "'");
        if (!driven[e.dst].insert(e.port).second)
            throw std::invalid_argument("netlist: port '" + e.dst + "." + e.port +
                                        "' has more than one driver");
    }
    for (const auto& n : nodes)
        for (const auto& p : required_ports(n))
            if (!driven[n.id].count(p))
                throw std::invalid_argument("netlist: port '" + n.id + "." + p +
                                            "' is undriven");
    // Weak connectivity.
    if (nodes.size() > 1) {
        std::map<std::string, std::set<std::string>> adj;
        for (const auto& e : edges) {
            adj[e.src].insert(e.dst);
            adj[e.dst].insert(e.src);
        }
        std::set<std::string> seen;
        std::vector<std::string> stack{nodes.front().id};
        while (!stack.empty()) {
            auto id = stack.back();
            stack.pop_back();
            if (!seen.insert(id).second) continue;
            for (const auto& next : adj[id]) stack.push_back(next);
        }
        if (seen.size() != nodes.size())
            throw std::invalid_argument("netlist: graph is not connected");
    }
    // Every cycle must be cut by a delayed edge: the undelayed subgraph
    // has to be a DAG.
    {
        std::map<std::string, int> indeg;
        std::map<std::string, std::vector<std::string>> fwd;
        for (const auto& n : nodes) indeg[n.id] = 0;
        for (const auto& e : edges) {
            if (e.delayed) continue;
            fwd[e.src].push_back(e.dst);
            ++indeg[e.dst];
        }
        std::vector<std::string> ready;
        for (auto& [id, d] : indeg)
            if (d == 0) ready.push_back(id);
        std::size_t done = 0;
        while (!ready.empty()) {
            auto id = ready.back();
            ready.pop_back();
            ++done;
            for (const auto& next : fwd[id])
                if (--indeg[next] == 0) ready.push_back(next);
        }
        if (done != nodes.size())
            throw std::invalid_argument("netlist: cycle without delay flag");
    }
    if (mode == LoopMode::open_loop) {
        const BlockSpec* pre = find("gen_tpre");
        const BlockSpec* post = find("gen_tpost");
        if (!pre || pre->kind != BlockKind::generator || !post ||
            post->kind != BlockKind::generator)
            throw std::invalid_argument(
                "netlist: open_loop mode requires gen_tpre and gen_tpost generators");
    }
    for (const auto& [id, train] : trains) {
        const BlockSpec* n = find(id);
        if (!n || n->kind != BlockKind::generator)
            throw std::invalid_argument("netlist: train bound to non-generator '" + id + "'");
        train.validate();
    }
}

NeuronNetlist build_standard_netlist(const ComponentValues& cv, const ModStageConfig& mod_cfg,
                                     LoopMode mode, const NetlistTuning& tuning,
                                     const SomaConfig& soma, OneShotSense sense) {
    cv.validate();
    mod_cfg.validate();
    tuning.validate();
    soma.validate();
    if (mode == LoopMode::open_loop && sense == OneShotSense::memristor_node)
        throw std::invalid_argument(
            "build_standard_netlist: memristor_node sense requires closed_loop mode "
            "(the open-loop rig has no memristor node)");

    NeuronNetlist nl;
    nl.mode = mode;
    nl.oneshot_sense = sense;

    const double tau = cv.integrator_tau();
    const double t1 = one_shot_duration(cv.c3, cv.r11, cv.r8, cv.r9);

    auto node = [&](std::string id, BlockKind kind, std::map<std::string, double> params) {
        nl.nodes.push_back(BlockSpec{std::move(id), kind, std::move(params)});
    };
    auto edge = [&](std::string src, std::string dst, std::string port, bool delayed = false) {
        nl.edges.push_back(Edge{std::move(src), std::move(dst), std::move(port), delayed});
    };

    node("gen_tpre", BlockKind::generator, {});
    node("u2", BlockKind::integrator, {{"tau", tau}, {"v_rail", cv.v_rail}});
    node("u6", BlockKind::integrator, {{"tau", tau}, {"v_rail", cv.v_rail}});
    std::map<std::string, double> oneshot_params = {
        {"pulse_width", t1},
        {"v_high", tuning.oneshot_v_high},
        {"v_threshold", cv.v_threshold_oneshot}};
    node("u3", BlockKind::one_shot, oneshot_params);
    node("u5", BlockKind::one_shot, oneshot_params);
    node("u8", BlockKind::inv_adder, {{"gain0", 1.0}, {"v_rail", cv.v_rail}});
    node("u1", BlockKind::inv_adder,
         {{"gain0", 1.0}, {"gain1", 1.0}, {"v_rail", cv.v_rail}});
    node("u7", BlockKind::adder_integrator,
         {{"tau", tuning.tau_inhibitor},
          {"gain0", 1.0},
          {"gain1", 1.0},
          {"bias", tuning.inhibitor_bias},
          {"clamp_lo", 0.0},
          {"clamp_hi", cv.v_rail}});
    node("q1", BlockKind::key_latch,
         {{"tau", tuning.tau_key},
          {"gain0", 1.0},
          {"gain1", -1.0},
          {"v_rail", cv.v_rail}});
    node("u9", BlockKind::inv_adder,
         {{"gain0", -tuning.adder_gain},
          {"gain1", -tuning.adder_gain},
          {"v_rail", cv.v_rail}});
    node("u10", BlockKind::controlled_inverter,
         {{"control_threshold", tuning.key_threshold}, {"v_rail", cv.v_rail}});
    node("u11", BlockKind::integrator, {{"tau", tuning.tau_output}, {"v_rail", cv.v_rail}});
    std::map<std::string, double> mod_params = {
        {"mode", mod_cfg.mode == ModMode::linear ? 0.0 : 1.0},
        {"wiper", mod_cfg.wiper},
        {"gain_min", mod_cfg.gain_min},
        {"gain_max", mod_cfg.gain_max},
        {"sombrero_center", mod_cfg.sombrero_center},
        {"sombrero_width", mod_cfg.sombrero_width},
        {"v_rail", cv.v_rail}};
    node("mod_hebb", BlockKind::mod_stage, mod_params);
    node("mod_inh", BlockKind::mod_stage, mod_params);

    // Pre chain.
    edge("gen_tpre", "u2", "in");
    // Post chain input depends on mode (external generator vs soma).
    const std::string post_src = mode == LoopMode::open_loop ? "gen_tpost" : "soma";
    if (mode == LoopMode::open_loop) {
        node("gen_tpost", BlockKind::generator, {});
        edge(post_src, "u6", "in");
    } else {
        node("soma", BlockKind::soma,
             {{"tau_mem", soma.tau_mem},
              {"v_threshold", soma.v_threshold},
              {"v_reset", soma.v_reset},
              {"refractory", soma.refractory},
              {"spike_width", soma.spike_width},
              {"spike_amplitude", soma.spike_amplitude},
              {"c_norm", soma.c_norm}});
        node("mem_ex", BlockKind::memristor,
             {{"g0", 5.05e-4},
              {"g_min", 10e-6},
              {"g_max", 1e-3},
              {"v_th_set", 0.5},
              {"v_th_reset", -0.5},
              {"mu", 1e-4}});
        edge("mod_hebb", "mem_ex", "drive");
        edge("gen_tpre", "mem_ex", "read");
        edge("mem_ex", "soma", "exc");
        edge("mod_inh", "soma", "inh");
        // The single flagged feedback edge closing the loop.
        edge(post_src, "u6", "in", true);
    }

    // One-shot sense node: either the path integrators or the voltage at
    // the memristive element (closed loop only; cuts back into the loop,
    // so those edges are delayed as well).
    if (sense == OneShotSense::integrator_output) {
        edge("u2", "u3", "in");
        edge("u6", "u5", "in");
    } else {
        edge("mod_hebb", "u3", "in", true);
        edge("mod_hebb", "u5", "in", true);
    }

    // iSTDP path: one-shots into the inverting adder U1 (post side via
    // inverter U8) and into the adder-integrator U7.
    edge("u5", "u8", "in0");
    edge("u3", "u1", "in0");
    edge("u8", "u1", "in1");
    edge("u3", "u7", "in0");
    edge("u5", "u7", "in1");
    edge("u7", "mod_inh", "in");

    // Q1 key latch remembers which one-shot fired first and steers U10.
    edge("u3", "q1", "in0");
    edge("u5", "q1", "in1");

    // Hebbian path: integrator sum, order-controlled inversion, output
    // integrator, modulation stage.
    edge("u2", "u9", "in0");
    edge("u6", "u9", "in1");
    edge("u9", "u10", "in");
    edge("q1", "u10", "ctrl");
    edge("u10", "u11", "in");
    edge("u11", "mod_hebb", "in");

    nl.validate();
    return nl;
}

SomaStepResult soma_step(const SomaState& state, double i_exc, double i_inh, double dt,
                         const SomaConfig& cfg) {
    if (!(dt > 0.0)) throw std::invalid_argument("soma_step: dt must be positive");
    cfg.validate();
    SomaStepResult res;
    res.state = state;
    if (state.refractory_left > 0.0) {
        res.state.refractory_left = std::max(0.0, state.refractory_left - dt);
        res.state.v = cfg.v_reset;
    } else {
        res.state.v =
            state.v + dt * (-state.v / cfg.tau_mem + (i_exc - i_inh) / cfg.c_norm);
        if (res.state.v >= cfg.v_threshold) {
            res.spike = true;
            res.state.v = cfg.v_reset;
            res.state.refractory_left = cfg.refractory;
            res.state.spike_left = cfg.spike_width;
        }
    }
    if (res.state.spike_left > 0.0) {
        res.y = cfg.spike_amplitude;
        res.state.spike_left = std::max(0.0, res.state.spike_left - dt);
    }
    return res;
}

} // namespace memsim
