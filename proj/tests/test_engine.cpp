#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "memsim/engine.hpp"

using namespace memsim;

namespace {

// Minimal two-generator harness that satisfies the open-loop naming
// contract: both generators feed an adder so the graph stays connected.
NeuronNetlist generator_pair() {
    NeuronNetlist nl;
    nl.mode = LoopMode::open_loop;
    nl.nodes = {
        BlockSpec{"gen_tpre", BlockKind::generator, {}},
        BlockSpec{"gen_tpost", BlockKind::generator, {}},
        BlockSpec{"sum", BlockKind::inv_adder,
                  {{"gain0", 1.0}, {"gain1", 1.0}, {"v_rail", 12.0}}},
    };
    nl.edges = {Edge{"gen_tpre", "sum", "in0", false},
                Edge{"gen_tpost", "sum", "in1", false}};
    return nl;
}

} // namespace

TEST_CASE("probed generator reproduces spike_train_to_trace exactly") {
    NeuronNetlist nl = generator_pair();
    SpikeTrain train{{1e-3, 4e-3, 7.3e-3}, 2e-4, 5.0};
    nl.trains["gen_tpre"] = train;
    TimeGrid grid{0.0, 1e-5, 1000};
    SimResult res = run(nl, SimConfig{grid, {"gen_tpre"}});
    Trace want = spike_train_to_trace(train, grid);
    CHECK(res.traces.at("gen_tpre").values == want.values);
}

TEST_CASE("integrator under constant drive matches the closed form") {
    NeuronNetlist nl;
    nl.mode = LoopMode::closed_loop; // bare chain, no naming contract
    nl.nodes = {BlockSpec{"a", BlockKind::generator, {}},
                BlockSpec{"b", BlockKind::integrator, {{"tau", 1e-3}, {"v_rail", 12.0}}}};
    nl.edges = {Edge{"a", "b", "in", false}};
    const double dt = 1e-5;
    TimeGrid grid{0.0, dt, 2000};
    nl.trains["a"] = SpikeTrain{{0.0}, grid.t_end() + 1.0, 1.0}; // constant 1 V
    SimResult res = run(nl, SimConfig{grid, {"b"}});
    const Trace& tr = res.traces.at("b");
    // Sample k holds the post-update value, i.e. the solution at (k+1)*dt.
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        const double want = 1.0 - std::exp(-(static_cast<double>(k) + 1.0) * dt / 1e-3);
        CHECK(std::abs(tr.values[k] - want) < 1e-9);
    }
}

TEST_CASE("identical runs are byte-identical") {
    NeuronNetlist nl = build_standard_netlist({}, {}, LoopMode::open_loop);
    nl.trains["gen_tpre"] = SpikeTrain{{10e-3}, 1e-4, 5.0};
    nl.trains["gen_tpost"] = SpikeTrain{{12e-3}, 1e-4, 5.0};
    SimConfig cfg{TimeGrid{0.0, 1e-6, 50000}, {"mod_hebb", "mod_inh", "u7", "u11"}};
    SimResult a = run(nl, cfg);
    SimResult b = run(nl, cfg);
    CHECK(a.traces == b.traces);
    CHECK(a.final_states == b.final_states);
}

TEST_CASE("adding a probe does not change other probes") {
    NeuronNetlist nl = build_standard_netlist({}, {}, LoopMode::open_loop);
    nl.trains["gen_tpre"] = SpikeTrain{{5e-3}, 1e-4, 5.0};
    nl.trains["gen_tpost"] = SpikeTrain{{7e-3}, 1e-4, 5.0};
    TimeGrid grid{0.0, 1e-6, 20000};
    SimResult narrow = run(nl, SimConfig{grid, {"mod_hebb"}});
    SimResult wide = run(nl, SimConfig{grid, {"mod_hebb", "u2", "u9", "q1"}});
    CHECK(narrow.traces.at("mod_hebb").values == wide.traces.at("mod_hebb").values);
}

TEST_CASE("topological order walks chains and breaks ties lexicographically") {
    NeuronNetlist chain;
    chain.mode = LoopMode::closed_loop;
    chain.nodes = {BlockSpec{"a", BlockKind::generator, {}},
                   BlockSpec{"b", BlockKind::integrator, {{"tau", 1e-3}, {"v_rail", 12.0}}},
                   BlockSpec{"c", BlockKind::integrator, {{"tau", 1e-3}, {"v_rail", 12.0}}}};
    chain.edges = {Edge{"a", "b", "in", false}, Edge{"b", "c", "in", false}};
    CHECK(topo_order(chain) == std::vector<std::string>{"a", "b", "c"});

    NeuronNetlist diamond;
    diamond.mode = LoopMode::closed_loop;
    diamond.nodes = {
        BlockSpec{"a", BlockKind::generator, {}},
        BlockSpec{"b", BlockKind::integrator, {{"tau", 1e-3}, {"v_rail", 12.0}}},
        BlockSpec{"c", BlockKind::integrator, {{"tau", 1e-3}, {"v_rail", 12.0}}},
        BlockSpec{"d", BlockKind::inv_adder,
                  {{"gain0", 1.0}, {"gain1", 1.0}, {"v_rail", 12.0}}}};
    diamond.edges = {Edge{"a", "b", "in", false}, Edge{"a", "c", "in", false},
                     Edge{"b", "d", "in0", false}, Edge{"c", "d", "in1", false}};
    CHECK(topo_order(diamond) == std::vector<std::string>{"a", "b", "c", "d"});

    NeuronNetlist cyc;
    cyc.mode = LoopMode::closed_loop;
    cyc.nodes = {BlockSpec{"a", BlockKind::integrator, {{"tau", 1e-3}, {"v_rail", 12.0}}},
                 BlockSpec{"b", BlockKind::integrator, {{"tau", 1e-3}, {"v_rail", 12.0}}}};
    cyc.edges = {Edge{"a", "b", "in", false}, Edge{"b", "a", "in", false}};
    CHECK_THROWS_AS(topo_order(cyc), std::invalid_argument);
}

TEST_CASE("delayed edge reads the previous step") {
    // a -> b (delayed): b's input at step k is a's output at step k-1,
    // so b lags the generator by exactly one sample.
    NeuronNetlist nl;
    nl.mode = LoopMode::closed_loop;
    nl.nodes = {BlockSpec{"a", BlockKind::generator, {}},
                BlockSpec{"b", BlockKind::inv_adder, {{"gain0", -1.0}, {"v_rail", 12.0}}}};
    nl.edges = {Edge{"a", "b", "in0", true}};
    TimeGrid grid{0.0, 1e-4, 20};
    nl.trains["a"] = SpikeTrain{{5e-4}, 3e-4, 1.0};
    SimResult res = run(nl, SimConfig{grid, {"a", "b"}});
    const auto& a = res.traces.at("a").values;
    const auto& b = res.traces.at("b").values;
    CHECK(b[0] == 0.0);
    for (std::size_t k = 1; k < grid.n_steps; ++k) CHECK(b[k] == a[k - 1]);
}

TEST_CASE("run rejects unknown probes and too-coarse steps") {
    NeuronNetlist nl = build_standard_netlist({}, {}, LoopMode::open_loop);
    nl.trains["gen_tpre"] = SpikeTrain{{1e-3}, 1e-4, 5.0};
    nl.trains["gen_tpost"] = SpikeTrain{{2e-3}, 1e-4, 5.0};
    CHECK_THROWS_AS(run(nl, SimConfig{TimeGrid{0.0, 1e-6, 10}, {"nope"}}),
                    std::invalid_argument);
    // tau_output = 0.2 ms is the fastest stage; dt = 0.1 ms violates tau/10.
    CHECK_THROWS_AS(run(nl, SimConfig{TimeGrid{0.0, 1e-4, 10}, {"mod_hebb"}}),
                    std::invalid_argument);
}

TEST_CASE("closed-loop netlist simulates and keeps conductance bounded") {
    NeuronNetlist nl = build_standard_netlist({}, {}, LoopMode::closed_loop);
    nl.trains["gen_tpre"] = SpikeTrain{{5e-3, 15e-3, 25e-3}, 1e-4, 5.0};
    TimeGrid grid{0.0, 1e-6, 40000};
    SimResult res = run(nl, SimConfig{grid, {"mod_hebb", "soma"}});
    const double g = res.final_states.at("mem_ex").at("g");
    CHECK(g >= 10e-6);
    CHECK(g <= 1e-3);
    for (double v : res.traces.at("mod_hebb").values) CHECK(std::abs(v) <= 12.0);
}

TEST_CASE("every block output respects the rails") {
    NeuronNetlist nl = build_standard_netlist({}, {}, LoopMode::open_loop);
    nl.trains["gen_tpre"] = SpikeTrain{{2e-3}, 1e-4, 5.0};
    nl.trains["gen_tpost"] = SpikeTrain{{3e-3}, 1e-4, 5.0};
    std::vector<std::string> probes;
    for (const auto& n : nl.nodes) probes.push_back(n.id);
    SimResult res = run(nl, SimConfig{TimeGrid{0.0, 1e-6, 30000}, probes});
    for (const auto& [id, tr] : res.traces)
        for (double v : tr.values) CHECK(std::abs(v) <= 12.0);
}
