#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "memsim/memristor.hpp"

using namespace memsim;

namespace {

// Independent forward-Euler oracle at a refined step: dg/dt = mu *
// overdrive(v) * window(g), clamped to [g_min, g_max].
double euler_oracle(MemristorState s, const Trace& pulse, int refine) {
    const double h = pulse.grid.dt / refine;
    const double half = (s.g_max - s.g_min) / 2.0;
    double g = s.g;
    for (double v : pulse.values) {
        double od = 0.0;
        if (v > s.v_th_set)
            od = v - s.v_th_set;
        else if (v < s.v_th_reset)
            od = v - s.v_th_reset;
        if (od == 0.0) continue;
        for (int i = 0; i < refine; ++i) {
            const double w = (s.g_max - g) * (g - s.g_min) / (half * half);
            g = std::clamp(g + s.mu * od * w * h, s.g_min, s.g_max);
        }
    }
    return g;
}

Trace random_pulse_train(std::mt19937& rng, const TimeGrid& grid) {
    std::uniform_real_distribution<double> level(-2.0, 2.0);
    std::uniform_int_distribution<int> hold(3, 25);
    Trace tr{grid, {}, Unit::volt};
    tr.values.reserve(grid.n_steps);
    while (tr.values.size() < grid.n_steps) {
        const double v = level(rng);
        for (int k = hold(rng); k > 0 && tr.values.size() < grid.n_steps; --k)
            tr.values.push_back(v);
    }
    return tr;
}

} // namespace

TEST_CASE("sub-threshold drive leaves the state bit-identical") {
    MemristorState s;
    for (double v : {0.0, 0.49, -0.49, 0.5, -0.5}) {
        MemristorState next = memristor_step(s, v, 1e-3);
        CHECK(next.g == s.g);
    }
}

TEST_CASE("midpoint update law evaluates by hand") {
    MemristorState s;
    s.g = (s.g_max + s.g_min) / 2.0; // window = 1 here
    s.mu = 1e-6;
    CHECK(s.window() == doctest::Approx(1.0).epsilon(1e-12));
    MemristorState next = memristor_step(s, s.v_th_set + 1.0, 1e-3);
    CHECK(next.g - s.g == doctest::Approx(1e-9).epsilon(1e-9));
}

TEST_CASE("repeated large pulses approach g_max without exceeding it") {
    MemristorState s;
    for (int k = 0; k < 50000; ++k) {
        s = memristor_step(s, 5.0, 1e-3);
        if (k % 500 == 0) CHECK(s.g <= s.g_max);
    }
    CHECK(s.g <= s.g_max);
    CHECK(s.g == doctest::Approx(s.g_max).epsilon(1e-3));
}

TEST_CASE("pointwise-larger positive drive never yields smaller final g") {
    std::mt19937 rng(13);
    TimeGrid grid{0.0, 1e-3, 200};
    for (int trial = 0; trial < 20; ++trial) {
        Trace base = random_pulse_train(rng, grid);
        for (double& v : base.values) v = std::abs(v); // positive drive
        Trace bigger = base;
        for (double& v : bigger.values) v *= 1.3;
        MemristorState s;
        const double g_base = memristor_drive(s, base).state.g;
        const double g_big = memristor_drive(s, bigger).state.g;
        CHECK(g_big >= g_base);
    }
}

TEST_CASE("conductance stays inside [g_min, g_max] on random drive") {
    std::mt19937 rng(17);
    TimeGrid grid{0.0, 1e-3, 300};
    for (int trial = 0; trial < 20; ++trial) {
        Trace tr = random_pulse_train(rng, grid);
        for (double& v : tr.values) v *= 40.0; // violent drive
        MemristorState s;
        auto res = memristor_drive(s, tr);
        for (double g : res.g_trace.values) {
            CHECK(g >= s.g_min);
            CHECK(g <= s.g_max);
        }
    }
}

TEST_CASE("all-zero trace keeps g_trace constant") {
    MemristorState s;
    TimeGrid grid{0.0, 1e-3, 50};
    auto res = memristor_drive(s, Trace{grid, std::vector<double>(50, 0.0)});
    for (double g : res.g_trace.values) CHECK(g == s.g);
}

TEST_CASE("single supra-threshold pulse grows g only during the pulse") {
    MemristorState s;
    TimeGrid grid{0.0, 1e-3, 30};
    Trace tr{grid, std::vector<double>(30, 0.0)};
    for (std::size_t k = 10; k < 20; ++k) tr.values[k] = 2.0;
    auto res = memristor_drive(s, tr);
    for (std::size_t k = 1; k < 30; ++k) {
        CHECK(res.g_trace.values[k] >= res.g_trace.values[k - 1]);
        if (k >= 10 && k < 20)
            CHECK(res.g_trace.values[k] > res.g_trace.values[k - 1]);
        else
            CHECK(res.g_trace.values[k] == res.g_trace.values[k - 1]);
    }
}

TEST_CASE("equal-energy bipolar pulse from the midpoint nearly cancels") {
    MemristorState s;
    s.g = (s.g_max + s.g_min) / 2.0;
    TimeGrid grid{0.0, 1e-4, 400};
    Trace tr{grid, std::vector<double>(400, 0.0)};
    for (std::size_t k = 0; k < 100; ++k) tr.values[k] = 1.5;
    for (std::size_t k = 100; k < 200; ++k) tr.values[k] = -1.5;
    auto res = memristor_drive(s, tr);
    CHECK(std::abs(res.state.g - s.g) < 0.01 * (s.g_max - s.g_min));
}

TEST_CASE("memristor_drive matches a dt/100 forward-Euler oracle") {
    std::mt19937 rng(23);
    TimeGrid grid{0.0, 1e-3, 200};
    for (int trial = 0; trial < 100; ++trial) {
        Trace tr = random_pulse_train(rng, grid);
        MemristorState s;
        const double got = memristor_drive(s, tr).state.g;
        const double want = euler_oracle(s, tr, 100);
        CHECK(std::abs(got - want) / want < 0.005);
    }
}

TEST_CASE("memristor state validation") {
    MemristorState s;
    CHECK_NOTHROW(s.validate());
    s.g = s.g_max * 2.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = MemristorState{};
    s.v_th_reset = 0.1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = MemristorState{};
    s.mu = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
