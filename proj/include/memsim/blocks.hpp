#pragma once

#include <span>

#include "memsim/signal.hpp"

namespace memsim {

/// First-order lag stage (op-amp RC integrator). The update uses the
/// exact discretization of dy/dt = (x - y)/tau, so refining the step
/// does not move the solution at shared grid points for constant input.
struct IntegratorState {
    double y = 0.0;   // volts
    double tau = 1e-3; // seconds, > 0
};

/// Monostable multivibrator. Fires a single fixed-width pulse when the
/// input crosses v_threshold while idle; non-retriggerable until the
/// pulse has run out.
struct OneShotState {
    enum class Phase { idle, firing };
    Phase phase = Phase::idle;
    double time_remaining = 0.0; // seconds, in [0, pulse_width]
    double pulse_width = 1e-3;   // seconds
    double v_high = 5.0;         // volts
    double v_threshold = 0.025;  // volts
};

enum class ModMode { linear, sombrero };

/// Dopamine modulation stage transfer curve. Linear maps the wiper
/// straight onto [gain_min, gain_max]; sombrero is a Gaussian bump
/// peaking at sombrero_center.
struct ModStageConfig {
    ModMode mode = ModMode::linear;
    double wiper = 0.5;           // [0, 1]
    double gain_min = 0.0;
    double gain_max = 2.0;
    double sombrero_center = 0.5; // fraction
    double sombrero_width = 0.25; // fraction, > 0

    void validate() const;
};

/// Exact one-step lag update with symmetric rail clamping.
/// Requires dt <= tau/10; anything coarser is a configuration error.
IntegratorState integrator_step(const IntegratorState& state, double x, double dt,
                                double v_rail);

/// T1 = c3 * r11 * ln(1 + r8/r9). All inputs must be positive.
double one_shot_duration(double c3, double r11, double r8, double r9);

struct OneShotOutput {
    OneShotState state;
    double y = 0.0; // volts
};

OneShotOutput one_shot_step(const OneShotState& state, double x, double dt);

/// y = clamp(-sum(g_i * x_i), +-v_rail). Lengths must match.
double inverting_adder(std::span<const double> inputs, std::span<const double> gains,
                       double v_rail);

/// Grounded control input -> inverter; control at/above threshold ->
/// plain (non-inverting) amplifier. Output is rail-clamped either way.
double controlled_inverter(double x, double control, double control_threshold,
                           double v_rail);

double modulation_gain(const ModStageConfig& cfg);

/// Scale every sample of a learning pulse by the stage gain, then clamp.
Trace apply_modulation(const Trace& learning_pulse, const ModStageConfig& cfg,
                       double v_rail);

inline double clamp_rail(double v, double v_rail) {
    if (v > v_rail) return v_rail;
    if (v < -v_rail) return -v_rail;
    return v;
}

} // namespace memsim
