#include "memsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "memsim/memristor.hpp"

namespace memsim {

std::vector<std::string> topo_order(const NeuronNetlist& netlist) {
    std::map<std::string, int> indeg;
    std::map<std::string, std::vector<std::string>> fwd;
    for (const auto& n : netlist.nodes) {
        if (indeg.count(n.id))
            throw std::invalid_argument("topo_order: duplicate node id '" + n.id + "'");
        indeg[n.id] = 0;
    }
    for (const auto& e : netlist.edges) {
        if (e.delayed) continue;
        if (!indeg.count(e.src) || !indeg.count(e.dst))
            throw std::invalid_argument("topo_order: edge references unknown node");
        fwd[e.src].push_back(e.dst);
        ++indeg[e.dst];
    }
    std::set<std::string> ready; // ordered: lexicographic tie-break
    for (const auto& [id, d] : indeg)
        if (d == 0) ready.insert(id);
    std::vector<std::string> order;
    order.reserve(netlist.nodes.size());
    while (!ready.empty()) {
        auto id = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(id);
        for (const auto& next : fwd[id])
            if (--indeg[next] == 0) ready.insert(next);
    }
    if (order.size() != netlist.nodes.size())
        throw std::invalid_argument("topo_order: cycle without delay flag");
    return order;
}

namespace {

struct Binding {
    std::size_t src = 0;
    bool delayed = false;
};

// Flattened runtime node. Parameters are copied out of the spec map and
// per-step coefficients (exp factors) precomputed once.
struct RtNode {
    BlockKind kind;
    std::string id;
    std::vector<Binding> inputs; // in port order
    std::vector<double> gains;   // inv_adder / adder_integrator / key_latch

    double v_rail = 12.0;
    double alpha = 0.0; // 1 - exp(-dt/tau) for integrating stages
    double bias = 0.0;
    double clamp_lo = 0.0, clamp_hi = 0.0;
    double control_threshold = 0.0;
    double mod_gain = 1.0;

    // one-shot
    double pulse_width = 0.0, v_high = 0.0, v_threshold = 0.0;
    bool firing = false;
    double time_remaining = 0.0;

    // integrating stages
    double y = 0.0;

    // generator
    const SpikeTrain* train = nullptr;
    std::size_t spike_idx = 0;

    // memristor
    MemristorState mem;

    // soma
    SomaConfig soma_cfg;
    SomaState soma;
};

double param(const BlockSpec& spec, const std::string& key) {
    auto it = spec.params.find(key);
    if (it == spec.params.end())
        throw std::invalid_argument("node '" + spec.id + "' missing parameter '" + key + "'");
    return it->second;
}

double clamp(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

} // namespace

SimResult run(const NeuronNetlist& netlist, const SimConfig& cfg) {
    netlist.validate();
    cfg.grid.validate();
    for (const auto& p : cfg.probes)
        if (!netlist.find(p))
            throw std::invalid_argument("run: probe references unknown node '" + p + "'");

    const double dt = cfg.grid.dt;
    const auto order = topo_order(netlist);

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < order.size(); ++i) index[order[i]] = i;

    auto check_tau = [&](const BlockSpec& spec, double tau) {
        if (dt > tau / 10.0)
            throw std::invalid_argument("run: dt > tau/10 for node '" + spec.id + "'");
        return tau;
    };

    std::vector<RtNode> rt(order.size());
    for (const auto& spec : netlist.nodes) {
        RtNode& n = rt[index.at(spec.id)];
        n.kind = spec.kind;
        n.id = spec.id;
        switch (spec.kind) {
        case BlockKind::generator: {
            auto it = netlist.trains.find(spec.id);
            n.train = it == netlist.trains.end() ? nullptr : &it->second;
            break;
        }
        case BlockKind::integrator:
            n.alpha = 1.0 - std::exp(-dt / check_tau(spec, param(spec, "tau")));
            n.v_rail = param(spec, "v_rail");
            break;
        case BlockKind::one_shot:
            n.pulse_width = param(spec, "pulse_width");
            n.v_high = param(spec, "v_high");
            n.v_threshold = param(spec, "v_threshold");
            if (n.pulse_width < dt)
                throw std::invalid_argument("run: one-shot pulse_width < dt on '" +
                                            spec.id + "'");
            break;
        case BlockKind::inv_adder:
            n.v_rail = param(spec, "v_rail");
            for (std::size_t i = 0; spec.params.count("gain" + std::to_string(i)); ++i)
                n.gains.push_back(param(spec, "gain" + std::to_string(i)));
            break;
        case BlockKind::controlled_inverter:
            n.control_threshold = param(spec, "control_threshold");
            n.v_rail = param(spec, "v_rail");
            break;
        case BlockKind::adder_integrator:
            n.alpha = 1.0 - std::exp(-dt / check_tau(spec, param(spec, "tau")));
            n.gains = {param(spec, "gain0"), param(spec, "gain1")};
            n.bias = param(spec, "bias");
            n.clamp_lo = param(spec, "clamp_lo");
            n.clamp_hi = param(spec, "clamp_hi");
            break;
        case BlockKind::key_latch:
            n.alpha = 1.0 - std::exp(-dt / check_tau(spec, param(spec, "tau")));
            n.gains = {param(spec, "gain0"), param(spec, "gain1")};
            n.v_rail = param(spec, "v_rail");
            break;
        case BlockKind::mod_stage: {
            ModStageConfig mc;
            mc.mode = param(spec, "mode") == 0.0 ? ModMode::linear : ModMode::sombrero;
            mc.wiper = param(spec, "wiper");
            mc.gain_min = param(spec, "gain_min");
            mc.gain_max = param(spec, "gain_max");
            mc.sombrero_center = param(spec, "sombrero_center");
            mc.sombrero_width = param(spec, "sombrero_width");
            n.mod_gain = modulation_gain(mc);
            n.v_rail = param(spec, "v_rail");
            break;
        }
        case BlockKind::memristor:
            n.mem.g = param(spec, "g0");
            n.mem.g_min = param(spec, "g_min");
            n.mem.g_max = param(spec, "g_max");
            n.mem.v_th_set = param(spec, "v_th_set");
            n.mem.v_th_reset = param(spec, "v_th_reset");
            n.mem.mu = param(spec, "mu");
            n.mem.validate();
            break;
        case BlockKind::soma:
            n.soma_cfg.tau_mem = check_tau(spec, param(spec, "tau_mem"));
            n.soma_cfg.v_threshold = param(spec, "v_threshold");
            n.soma_cfg.v_reset = param(spec, "v_reset");
            n.soma_cfg.refractory = param(spec, "refractory");
            n.soma_cfg.spike_width = param(spec, "spike_width");
            n.soma_cfg.spike_amplitude = param(spec, "spike_amplitude");
            n.soma_cfg.c_norm = param(spec, "c_norm");
            n.soma_cfg.validate();
            break;
        }
    }

    // Resolve input bindings in required-port order (lexicographic port
    // names happen to match the positional order used below).
    std::map<std::string, std::map<std::string, Binding>> by_port;
    for (const auto& e : netlist.edges)
        by_port[e.dst][e.port] = Binding{index.at(e.src), e.delayed};
    auto bind = [&](RtNode& n, std::initializer_list<const char*> ports) {
        for (const char* p : ports) n.inputs.push_back(by_port.at(n.id).at(p));
    };
    for (RtNode& n : rt) {
        switch (n.kind) {
        case BlockKind::generator: break;
        case BlockKind::integrator:
        case BlockKind::one_shot:
        case BlockKind::mod_stage: bind(n, {"in"}); break;
        case BlockKind::controlled_inverter: bind(n, {"in", "ctrl"}); break;
        case BlockKind::adder_integrator:
        case BlockKind::key_latch: bind(n, {"in0", "in1"}); break;
        case BlockKind::memristor: bind(n, {"drive", "read"}); break;
        case BlockKind::soma: bind(n, {"exc", "inh"}); break;
        case BlockKind::inv_adder:
            for (std::size_t i = 0; i < n.gains.size(); ++i)
                n.inputs.push_back(by_port.at(n.id).at("in" + std::to_string(i)));
            break;
        }
    }

    std::vector<double> cur(rt.size(), 0.0), prev(rt.size(), 0.0);
    std::vector<std::vector<double>> probe_data(cfg.probes.size());
    std::vector<std::size_t> probe_idx;
    for (std::size_t i = 0; i < cfg.probes.size(); ++i) {
        probe_idx.push_back(index.at(cfg.probes[i]));
        probe_data[i].reserve(cfg.grid.n_steps);
    }

    auto in = [&](const RtNode& n, std::size_t i) {
        const Binding& b = n.inputs[i];
        return b.delayed ? prev[b.src] : cur[b.src];
    };

    for (std::size_t k = 0; k < cfg.grid.n_steps; ++k) {
        const double t = cfg.grid.time_at(k);
        for (std::size_t i = 0; i < rt.size(); ++i) {
            RtNode& n = rt[i];
            double out = 0.0;
            switch (n.kind) {
            case BlockKind::generator: {
                if (n.train) {
                    const auto& ts = n.train->spike_times;
                    while (n.spike_idx < ts.size() &&
                           t >= ts[n.spike_idx] + n.train->pulse_width)
                        ++n.spike_idx;
                    if (n.spike_idx < ts.size() && t >= ts[n.spike_idx])
                        out = n.train->amplitude;
                }
                break;
            }
            case BlockKind::integrator:
                n.y = clamp(n.y + (in(n, 0) - n.y) * n.alpha, -n.v_rail, n.v_rail);
                out = n.y;
                break;
            case BlockKind::one_shot: {
                if (!n.firing && in(n, 0) >= n.v_threshold) {
                    n.firing = true;
                    n.time_remaining = n.pulse_width;
                }
                if (n.firing) {
                    out = n.v_high;
                    n.time_remaining -= dt;
                    if (n.time_remaining <= 0.0) {
                        n.firing = false;
                        n.time_remaining = 0.0;
                    }
                }
                break;
            }
            case BlockKind::inv_adder: {
                double acc = 0.0;
                for (std::size_t j = 0; j < n.gains.size(); ++j)
                    acc += n.gains[j] * in(n, j);
                out = clamp(-acc, -n.v_rail, n.v_rail);
                break;
            }
            case BlockKind::controlled_inverter:
                out = clamp(in(n, 1) < n.control_threshold ? -in(n, 0) : in(n, 0),
                            -n.v_rail, n.v_rail);
                break;
            case BlockKind::adder_integrator: {
                const double u = n.gains[0] * in(n, 0) + n.gains[1] * in(n, 1) + n.bias;
                n.y = clamp(n.y + (u - n.y) * n.alpha, n.clamp_lo, n.clamp_hi);
                out = n.y;
                break;
            }
            case BlockKind::key_latch: {
                const double u = n.gains[0] * in(n, 0) + n.gains[1] * in(n, 1);
                n.y = clamp(n.y + (u - n.y) * n.alpha, -n.v_rail, n.v_rail);
                out = n.y;
                break;
            }
            case BlockKind::mod_stage:
                out = clamp(n.mod_gain * in(n, 0), -n.v_rail, n.v_rail);
                break;
            case BlockKind::memristor:
                n.mem = memristor_step(n.mem, in(n, 0), dt);
                out = n.mem.g * in(n, 1); // ohmic read current, amperes
                break;
            case BlockKind::soma: {
                auto res = soma_step(n.soma, in(n, 0), in(n, 1), dt, n.soma_cfg);
                n.soma = res.state;
                out = res.y;
                break;
            }
            }
            cur[i] = out;
        }
        for (std::size_t p = 0; p < probe_idx.size(); ++p)
            probe_data[p].push_back(cur[probe_idx[p]]);
        prev = cur;
    }

    SimResult result;
    for (std::size_t p = 0; p < cfg.probes.size(); ++p) {
        const RtNode& n = rt[probe_idx[p]];
        Unit unit = n.kind == BlockKind::memristor ? Unit::dimensionless : Unit::volt;
        result.traces[cfg.probes[p]] = Trace{cfg.grid, std::move(probe_data[p]), unit};
    }
    for (const RtNode& n : rt) {
        std::map<std::string, double>& st = result.final_states[n.id];
        switch (n.kind) {
        case BlockKind::generator: st["spike_idx"] = static_cast<double>(n.spike_idx); break;
        case BlockKind::one_shot:
            st["firing"] = n.firing ? 1.0 : 0.0;
            st["time_remaining"] = n.time_remaining;
            break;
        case BlockKind::memristor: st["g"] = n.mem.g; break;
        case BlockKind::soma:
            st["v"] = n.soma.v;
            st["refractory_left"] = n.soma.refractory_left;
            st["spike_left"] = n.soma.spike_left;
            break;
        case BlockKind::inv_adder:
        case BlockKind::controlled_inverter:
        case BlockKind::mod_stage: break; // stateless
        default: st["y"] = n.y; break;
        }
    }
    return result;
}

} // namespace memsim
