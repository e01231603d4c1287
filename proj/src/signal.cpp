#include "memsim/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace memsim {

std::string unit_name(Unit u) {
    switch (u) {
    case Unit::volt: return "volt";
    case Unit::siemens: return "siemens";
    case Unit::dimensionless: return "dimensionless";
    }
    return "?";
}

void TimeGrid::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("TimeGrid: dt must be positive and finite");
    if (n_steps < 1)
        throw std::invalid_argument("TimeGrid: n_steps must be >= 1");
    if (!std::isfinite(t_start))
        throw std::invalid_argument("TimeGrid: t_start must be finite");
}

void Trace::validate() const {
    grid.validate();
    if (values.size() != grid.n_steps)
        throw std::invalid_argument("Trace: values length does not match grid.n_steps");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("Trace: non-finite sample");
}

void SpikeTrain::validate() const {
    if (!(pulse_width > 0.0))
        throw std::invalid_argument("SpikeTrain: pulse_width must be positive");
    for (std::size_t i = 0; i < spike_times.size(); ++i) {
        if (!std::isfinite(spike_times[i]))
            throw std::invalid_argument("SpikeTrain: non-finite spike time");
        if (i > 0 && !(spike_times[i] - spike_times[i - 1] >= pulse_width))
            throw std::invalid_argument(
                "SpikeTrain: spikes must be separated by at least pulse_width");
    }
}

void ComponentValues::validate() const {
    auto pos = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("ComponentValues: ") + name +
                                        " must be positive");
    };
    pos(r4, "r4");
    pos(c1, "c1");
    pos(c3, "c3");
    pos(r8, "r8");
    pos(r9, "r9");
    pos(r11, "r11");
    pos(mod_pot_total, "mod_pot_total");
    pos(v_rail, "v_rail");
    pos(v_threshold_oneshot, "v_threshold_oneshot");
    if (!(mod_wiper >= 0.0 && mod_wiper <= 1.0))
        throw std::invalid_argument("ComponentValues: mod_wiper must be in [0, 1]");
}

double trace_at(const Trace& trace, double t) {
    const TimeGrid& g = trace.grid;
    if (!(t >= g.t_start) || !(t < g.t_end()))
        throw std::out_of_range("trace_at: t outside grid span");
    auto k = static_cast<std::size_t>((t - g.t_start) / g.dt);
    // Guard against floating-point boundary effects of the division.
    while (k + 1 < g.n_steps && g.time_at(k + 1) <= t) ++k;
    while (k > 0 && g.time_at(k) > t) --k;
    return trace.values[k];
}

Trace spike_train_to_trace(const SpikeTrain& train, const TimeGrid& grid) {
    train.validate();
    grid.validate();
    Trace out{grid, std::vector<double>(grid.n_steps, 0.0), Unit::volt};
    const auto n = static_cast<double>(grid.n_steps);
    for (double s : train.spike_times) {
        double lo = (s - grid.t_start) / grid.dt;
        double hi = (s + train.pulse_width - grid.t_start) / grid.dt;
        if (hi <= 0.0 || lo >= n) continue; // clipped
        auto k = static_cast<std::size_t>(std::max(0.0, std::ceil(lo)));
        while (k > 0 && grid.time_at(k - 1) >= s) --k;
        while (k < grid.n_steps && grid.time_at(k) < s) ++k;
        for (; k < grid.n_steps && grid.time_at(k) < s + train.pulse_width; ++k)
            out.values[k] = train.amplitude;
    }
    return out;
}

} // namespace memsim
