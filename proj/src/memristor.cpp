#include "memsim/memristor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace memsim {

void MemristorState::validate() const {
    if (!(g_min > 0.0))
        throw std::invalid_argument("MemristorState: g_min must be positive");
    if (!(g_max > g_min))
        throw std::invalid_argument("MemristorState: g_max must exceed g_min");
    if (!(g >= g_min && g <= g_max))
        throw std::invalid_argument("MemristorState: g must lie in [g_min, g_max]");
    if (!(v_th_set > 0.0))
        throw std::invalid_argument("MemristorState: v_th_set must be positive");
    if (!(v_th_reset < 0.0))
        throw std::invalid_argument("MemristorState: v_th_reset must be negative");
    if (!(mu > 0.0))
        throw std::invalid_argument("MemristorState: mu must be positive");
}

MemristorState memristor_step(const MemristorState& state, double v, double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("memristor_step: dt must be positive");
    double overdrive = 0.0;
    if (v > state.v_th_set)
        overdrive = v - state.v_th_set;
    else if (v < state.v_th_reset)
        overdrive = v - state.v_th_reset;
    else
        return state; // sub-threshold: bit-identical
    MemristorState next = state;
    next.g = std::clamp(state.g + state.mu * overdrive * state.window() * dt,
                        state.g_min, state.g_max);
    return next;
}

MemristorDriveResult memristor_drive(const MemristorState& state, const Trace& pulse_trace) {
    pulse_trace.validate();
    MemristorDriveResult out;
    out.state = state;
    out.g_trace.grid = pulse_trace.grid;
    out.g_trace.unit = Unit::siemens;
    out.g_trace.values.resize(pulse_trace.values.size());
    const double dt = pulse_trace.grid.dt;
    for (std::size_t k = 0; k < pulse_trace.values.size(); ++k) {
        out.state = memristor_step(out.state, pulse_trace.values[k], dt);
        out.g_trace.values[k] = out.state.g;
    }
    return out;
}

} // namespace memsim
