#pragma once

#include "memsim/signal.hpp"

namespace memsim {

/// Bounded-conductance synaptic memristor. Threshold-gated drift with a
/// quadratic window that pins the conductance strictly inside
/// (g_min, g_max). Stands in for the physical PANI device; every
/// parameter is configuration so a measured device model can replace
/// the defaults.
struct MemristorState {
    double g = 5.05e-4;      // siemens, current conductance
    double g_min = 10e-6;    // siemens
    double g_max = 1e-3;     // siemens
    double v_th_set = 0.5;   // volts, > 0, potentiation threshold
    double v_th_reset = -0.5; // volts, < 0, depression threshold
    double mu = 1e-4;        // siemens per volt-second, update rate

    void validate() const;

    /// Quadratic window, normalized to 1 at the midpoint of [g_min, g_max].
    double window() const {
        const double half = (g_max - g_min) / 2.0;
        return (g_max - g) * (g - g_min) / (half * half);
    }
};

/// One explicit step of the drift law. Sub-threshold voltage leaves the
/// state bit-identical.
MemristorState memristor_step(const MemristorState& state, double v, double dt);

struct MemristorDriveResult {
    MemristorState state;
    Trace g_trace; // unit = siemens, one sample per input step
};

/// Fold memristor_step over a voltage trace, recording the conductance
/// after every step.
MemristorDriveResult memristor_drive(const MemristorState& state, const Trace& pulse_trace);

} // namespace memsim
