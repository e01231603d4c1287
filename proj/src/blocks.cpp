#include "memsim/blocks.hpp"

#include <cmath>
#include <stdexcept>

namespace memsim {

void ModStageConfig::validate() const {
    if (!(wiper >= 0.0 && wiper <= 1.0))
        throw std::invalid_argument("ModStageConfig: wiper must be in [0, 1]");
    if (!(gain_min >= 0.0))
        throw std::invalid_argument("ModStageConfig: gain_min must be >= 0");
    if (!(gain_max > gain_min))
        throw std::invalid_argument("ModStageConfig: gain_max must exceed gain_min");
    if (!(sombrero_width > 0.0))
        throw std::invalid_argument("ModStageConfig: sombrero_width must be positive");
}

IntegratorState integrator_step(const IntegratorState& state, double x, double dt,
                                double v_rail) {
    if (!(dt > 0.0))
        throw std::invalid_argument("integrator_step: dt must be positive");
    if (!(state.tau > 0.0))
        throw std::invalid_argument("integrator_step: tau must be positive");
    if (dt > state.tau / 10.0)
        throw std::invalid_argument("integrator_step: dt > tau/10, step too coarse");
    IntegratorState next = state;
    const double alpha = 1.0 - std::exp(-dt / state.tau);
    next.y = clamp_rail(state.y + (x - state.y) * alpha, v_rail);
    return next;
}

double one_shot_duration(double c3, double r11, double r8, double r9) {
    if (!(c3 > 0.0 && r11 > 0.0 && r8 > 0.0 && r9 > 0.0))
        throw std::invalid_argument("one_shot_duration: all inputs must be positive");
    return c3 * r11 * std::log1p(r8 / r9);
}

OneShotOutput one_shot_step(const OneShotState& state, double x, double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("one_shot_step: dt must be positive");
    if (!(state.pulse_width >= dt))
        throw std::invalid_argument("one_shot_step: pulse_width must be >= dt");
    OneShotOutput out{state, 0.0};
    if (state.phase == OneShotState::Phase::idle) {
        if (x >= state.v_threshold) {
            out.state.phase = OneShotState::Phase::firing;
            out.state.time_remaining = state.pulse_width;
        }
    }
    if (out.state.phase == OneShotState::Phase::firing) {
        out.y = state.v_high;
        out.state.time_remaining -= dt;
        if (out.state.time_remaining <= 0.0) {
            out.state.phase = OneShotState::Phase::idle;
            out.state.time_remaining = 0.0;
        }
    }
    return out;
}

double inverting_adder(std::span<const double> inputs, std::span<const double> gains,
                       double v_rail) {
    if (inputs.empty() || inputs.size() != gains.size())
        throw std::invalid_argument("inverting_adder: inputs/gains length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) acc += gains[i] * inputs[i];
    return clamp_rail(-acc, v_rail);
}

double controlled_inverter(double x, double control, double control_threshold,
                           double v_rail) {
    return clamp_rail(control < control_threshold ? -x : x, v_rail);
}

double modulation_gain(const ModStageConfig& cfg) {
    cfg.validate();
    if (cfg.mode == ModMode::linear)
        return cfg.gain_min + cfg.wiper * (cfg.gain_max - cfg.gain_min);
    const double z = (cfg.wiper - cfg.sombrero_center) / cfg.sombrero_width;
    return cfg.gain_min + (cfg.gain_max - cfg.gain_min) * std::exp(-z * z);
}

Trace apply_modulation(const Trace& learning_pulse, const ModStageConfig& cfg,
                       double v_rail) {
    const double g = modulation_gain(cfg);
    Trace out = learning_pulse;
    for (double& v : out.values) v = clamp_rail(v * g, v_rail);
    return out;
}

} // namespace memsim
