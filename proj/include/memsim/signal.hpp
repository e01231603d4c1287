#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace memsim {

/// Physical unit carried by a Trace.
enum class Unit { volt, siemens, dimensionless };

std::string unit_name(Unit u);

/// Uniform sampling grid. Sample k lives at t_start + k*dt, computed
/// directly (never as a running sum) so there is no accumulated drift.
struct TimeGrid {
    double t_start = 0.0;
    double dt = 1e-6;
    std::size_t n_steps = 1;

    double time_at(std::size_t k) const { return t_start + static_cast<double>(k) * dt; }
    /// One past the last sample, i.e. t_start + n_steps*dt.
    double t_end() const { return t_start + static_cast<double>(n_steps) * dt; }

    void validate() const; // throws std::invalid_argument

    bool operator==(const TimeGrid&) const = default;
};

/// Sampled signal on a TimeGrid. The engine's universal currency.
struct Trace {
    TimeGrid grid;
    std::vector<double> values;
    Unit unit = Unit::volt;

    void validate() const; // length match + all samples finite

    bool operator==(const Trace&) const = default;
};

/// Rectangular pulse train: `amplitude` volts during
/// [spike_time, spike_time + pulse_width), zero elsewhere.
struct SpikeTrain {
    std::vector<double> spike_times; // strictly increasing, gap >= pulse_width
    double pulse_width = 100e-6;
    double amplitude = 5.0;

    void validate() const;

    bool operator==(const SpikeTrain&) const = default;
};

/// Discrete component values of the wiring schematic plus the op-amp
/// rails shared by every behavioral block.
struct ComponentValues {
    double r4 = 10e3;   // ohms; integrator tau = r4*c1
    double c1 = 1e-6;   // farads
    double c3 = 1e-6;   // farads; one-shot timing
    double r8 = 30e3;   // ohms
    double r9 = 30e3;   // ohms
    double r11 = 30e3;  // ohms; one-shot T1 = c3*r11*ln(1 + r8/r9)
    double mod_pot_total = 50e3; // ohms; DA potentiometer full scale
    double mod_wiper = 0.5;      // fraction of the pot, [0, 1]
    double v_rail = 12.0;        // volts; symmetric op-amp saturation
    double v_threshold_oneshot = 0.025; // volts; one-shot trigger level

    double integrator_tau() const { return r4 * c1; }

    void validate() const;
};

/// Pre/post spike lag. Positive means the pre-synaptic spike precedes
/// the post-synaptic spike (the causal, potentiating order). This sign
/// convention is fixed repo-wide.
struct DeltaT {
    double value = 0.0; // seconds, signed

    bool operator==(const DeltaT&) const = default;
};

/// Zero-order hold read: sample at the nearest-lower grid point.
/// Valid for t in [t_start, t_end()); anything else throws std::out_of_range.
double trace_at(const Trace& trace, double t);

/// Render a spike train onto a grid as rectangular voltage pulses.
/// Spikes partially or fully outside the grid are silently clipped.
Trace spike_train_to_trace(const SpikeTrain& train, const TimeGrid& grid);

} // namespace memsim
