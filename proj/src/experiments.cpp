#include "memsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "memsim/blocks.hpp"

namespace memsim {

void ExperimentSetup::validate() const {
    cv.validate();
    mod.validate();
    tuning.validate();
    soma.validate();
    memristor.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("ExperimentSetup: dt must be positive");
    if (!(spike_width > 0.0))
        throw std::invalid_argument("ExperimentSetup: spike_width must be positive");
    if (!(t0 >= 0.0)) throw std::invalid_argument("ExperimentSetup: t0 must be >= 0");
}

double reference_hebbian_dw(DeltaT delta_t, double a, double dw_max) {
    if (delta_t.value == 0.0) return dw_max;
    const double mag = std::min(a / std::abs(delta_t.value), dw_max);
    return delta_t.value > 0.0 ? mag : -mag;
}

std::vector<DeltaT> default_delta_ts() {
    std::vector<DeltaT> out;
    for (double ms : {-16.0, -8.0, -4.0, -2.0, -1.0, 1.0, 2.0, 4.0, 8.0, 16.0})
        out.push_back(DeltaT{ms * 1e-3});
    return out;
}

double signed_extremum(const Trace& trace, double t_lo, double t_hi) {
    const TimeGrid& g = trace.grid;
    double best = 0.0, best_mag = -1.0;
    for (std::size_t k = 0; k < g.n_steps; ++k) {
        const double t = g.time_at(k);
        if (t < t_lo || t > t_hi) continue;
        const double mag = std::abs(trace.values[k]);
        if (mag > best_mag) {
            best_mag = mag;
            best = trace.values[k];
        }
    }
    if (best_mag < 0.0)
        throw std::invalid_argument("signed_extremum: window does not intersect grid");
    return best;
}

namespace {

struct PointRun {
    Trace probe_trace;
    double window_lo = 0.0, window_hi = 0.0;
};

// One pre/post pairing in the open-loop rig, probing one output node.
PointRun run_pairing(const ExperimentSetup& setup, DeltaT delta_t,
                     const std::string& probe) {
    const double tau = setup.cv.integrator_tau();
    const double t_post = setup.t0 + delta_t.value;
    if (t_post < 0.0 || setup.t0 < 0.0)
        throw std::invalid_argument("sweep: spike placed before the grid start");

    const double t_end =
        setup.t0 + std::abs(delta_t.value) + 5.0 * tau + 2e-3; // readout window + margin
    TimeGrid grid{0.0, setup.dt, static_cast<std::size_t>(std::ceil(t_end / setup.dt))};

    NeuronNetlist nl = build_standard_netlist(setup.cv, setup.mod, LoopMode::open_loop,
                                              setup.tuning, setup.soma);
    nl.trains["gen_tpre"] = SpikeTrain{{setup.t0}, setup.spike_width, setup.spike_amplitude};
    nl.trains["gen_tpost"] = SpikeTrain{{t_post}, setup.spike_width, setup.spike_amplitude};

    SimResult res = run(nl, SimConfig{grid, {probe}});
    return PointRun{std::move(res.traces.at(probe)), setup.t0 - 5e-3,
                    setup.t0 + std::abs(delta_t.value) + 5.0 * tau};
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

std::vector<LearningCurvePoint> sweep_curve(const ExperimentSetup& setup,
                                            const std::vector<DeltaT>& delta_ts,
                                            const std::string& probe, int jobs) {
    setup.validate();
    std::vector<LearningCurvePoint> out(delta_ts.size());
    parallel_for(delta_ts.size(), jobs, [&](std::size_t i) {
        PointRun pr = run_pairing(setup, delta_ts[i], probe);
        out[i] = LearningCurvePoint{
            delta_ts[i], signed_extremum(pr.probe_trace, pr.window_lo, pr.window_hi)};
    });
    return out;
}

std::vector<DaSweepPoint> sweep_da(const ExperimentSetup& setup,
                                   const std::vector<DaSetting>& settings,
                                   const std::string& probe, DeltaT fixed_delta_t,
                                   int jobs) {
    setup.validate();
    for (const auto& s : settings) {
        if (!(s.wiper >= 0.0 && s.wiper <= 1.0))
            throw std::invalid_argument("sweep_da: wiper outside [0, 1]");
        if (!s.pot_label.empty() &&
            std::abs(wiper_from_pot_label(s.pot_label) - s.wiper) > 1e-9)
            throw std::invalid_argument("sweep_da: wiper inconsistent with pot label '" +
                                        s.pot_label + "'");
    }
    std::vector<DaSweepPoint> out(settings.size());
    parallel_for(settings.size(), jobs, [&](std::size_t i) {
        ExperimentSetup local = setup;
        local.mod.wiper = settings[i].wiper;
        PointRun pr = run_pairing(local, fixed_delta_t, probe);
        out[i] = DaSweepPoint{
            settings[i].wiper, settings[i].pot_label,
            std::abs(signed_extremum(pr.probe_trace, pr.window_lo, pr.window_hi))};
    });
    return out;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    const int workers =
        std::max(1, std::min<int>(jobs, static_cast<int>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace

std::vector<LearningCurvePoint> sweep_stdp(const ExperimentSetup& setup,
                                           const std::vector<DeltaT>& delta_ts, int jobs) {
    return sweep_curve(setup, delta_ts, "mod_hebb", jobs);
}

std::vector<LearningCurvePoint> sweep_istdp(const ExperimentSetup& setup,
                                            const std::vector<DeltaT>& delta_ts, int jobs) {
    return sweep_curve(setup, delta_ts, "mod_inh", jobs);
}

std::vector<DaSweepPoint> sweep_da_stdp(const ExperimentSetup& setup,
                                        const std::vector<DaSetting>& settings,
                                        DeltaT fixed_delta_t, int jobs) {
    return sweep_da(setup, settings, "mod_hebb", fixed_delta_t, jobs);
}

std::vector<DaSweepPoint> sweep_da_istdp(const ExperimentSetup& setup,
                                         const std::vector<DaSetting>& settings,
                                         DeltaT fixed_delta_t, int jobs) {
    return sweep_da(setup, settings, "mod_inh", fixed_delta_t, jobs);
}

std::vector<DaSetting> default_da_stdp_settings() {
    return {{"0/50 kOhm", 0.0},
            {"25/25 kOhm", 0.5},
            {"37.5/12.5 kOhm", 0.75},
            {"50/0 kOhm", 1.0}};
}

std::vector<DaSetting> default_da_istdp_settings() {
    return {{"0/1000 kOhm", 0.0},
            {"250/750 kOhm", 0.25},
            {"500/500 kOhm", 0.5},
            {"750/250 kOhm", 0.75}};
}

double wiper_from_pot_label(const std::string& label) {
    const char* p = label.c_str();
    char* end = nullptr;
    const double a = std::strtod(p, &end);
    if (end == p || *end != '/')
        throw std::invalid_argument("bad potentiometer label '" + label + "'");
    p = end + 1;
    const double b = std::strtod(p, &end);
    if (end == p || !(a >= 0.0) || !(b >= 0.0) || a + b <= 0.0)
        throw std::invalid_argument("bad potentiometer label '" + label + "'");
    return a / (a + b);
}

ConductanceProtocol default_conductance_protocol(const ExperimentSetup& setup,
                                                 double duration, double wiper_low,
                                                 double wiper_high) {
    if (!(duration > 0.0))
        throw std::invalid_argument("conductance protocol: duration must be positive");
    TimeGrid grid{0.0, setup.dt, static_cast<std::size_t>(std::ceil(duration / setup.dt))};
    ConductanceProtocol proto;
    proto.da_schedule = Trace{grid, std::vector<double>(grid.n_steps), Unit::dimensionless};
    for (std::size_t k = 0; k < grid.n_steps; ++k)
        proto.da_schedule.values[k] =
            grid.time_at(k) < duration / 2.0 ? wiper_low : wiper_high;
    // Two "generators with phase shift": the post period exceeds the pre
    // period by 1 ms, so delta_t walks up through 1..N ms.
    const double pre_period = 50e-3;
    const double post_period = 51e-3;
    proto.pre.pulse_width = proto.post.pulse_width = setup.spike_width;
    proto.pre.amplitude = proto.post.amplitude = setup.spike_amplitude;
    for (double t_pre = 10e-3, t_post = 11e-3; t_post + setup.spike_width < duration;
         t_pre += pre_period, t_post += post_period) {
        proto.pre.spike_times.push_back(t_pre);
        proto.post.spike_times.push_back(t_post);
    }
    return proto;
}

ConductanceRun run_conductance_experiment(const ExperimentSetup& setup,
                                          const Trace& da_schedule, const SpikeTrain& pre,
                                          const SpikeTrain& post) {
    setup.validate();
    da_schedule.validate();
    NeuronNetlist nl = build_standard_netlist(setup.cv, setup.mod, LoopMode::open_loop,
                                              setup.tuning, setup.soma);
    nl.trains["gen_tpre"] = pre;
    nl.trains["gen_tpost"] = post;

    // Probe the raw learning output ahead of the modulation stage, then
    // modulate per-sample with the scheduled wiper level.
    SimResult res = run(nl, SimConfig{da_schedule.grid, {"u11"}});
    Trace pulse = std::move(res.traces.at("u11"));
    ModStageConfig mc = setup.mod;
    for (std::size_t k = 0; k < pulse.values.size(); ++k) {
        mc.wiper = da_schedule.values[k];
        pulse.values[k] =
            clamp_rail(pulse.values[k] * modulation_gain(mc), setup.cv.v_rail);
    }

    auto drive = memristor_drive(setup.memristor, pulse);
    return ConductanceRun{da_schedule, std::move(drive.g_trace), std::move(pulse)};
}

} // namespace memsim
