#pragma once

#include <string>
#include <vector>

#include "memsim/engine.hpp"
#include "memsim/memristor.hpp"
#include "memsim/netlist.hpp"
#include "memsim/signal.hpp"

namespace memsim {

struct LearningCurvePoint {
    DeltaT delta_t;
    double dw = 0.0; // signed extremum of the learning output, volts
};

struct DaSweepPoint {
    double wiper = 0.0;
    std::string pot_label; // e.g. "25/25 kOhm"; empty means unlabeled
    double peak_amplitude = 0.0; // volts
};

struct DaSetting {
    std::string pot_label;
    double wiper = 0.0;
};

struct ConductanceRun {
    Trace da_trace;    // modulation wiper level vs time
    Trace g_trace;     // memristor conductance vs time
    Trace pulse_trace; // modulated learning impulses vs time
};

/// Shared per-protocol parameters: the rig and the stimulus shape.
struct ExperimentSetup {
    ComponentValues cv;
    ModStageConfig mod;
    NetlistTuning tuning;
    SomaConfig soma;
    MemristorState memristor;
    double dt = 1e-6;
    double spike_width = 100e-6; // seconds
    double spike_amplitude = 5.0; // volts
    double t0 = 30e-3;            // pre-synaptic spike time

    void validate() const;
};

/// Target learning curve: sign(dt) * min(a/|dt|, dw_max); dw_max at dt = 0.
double reference_hebbian_dw(DeltaT delta_t, double a, double dw_max);

/// The paper's sweep grid: +-{1, 2, 4, 8, 16} ms, sorted ascending.
std::vector<DeltaT> default_delta_ts();

/// One pre spike at t0 and one post spike at t0 + delta_t per point,
/// open loop; dw is the signed extremum of the probed output over
/// [t0 - 5 ms, t0 + |delta_t| + 5*tau]. Points run independently across
/// up to `jobs` threads; output order follows the input order.
std::vector<LearningCurvePoint> sweep_stdp(const ExperimentSetup& setup,
                                           const std::vector<DeltaT>& delta_ts,
                                           int jobs = 1);

/// Same protocol measured on the inhibitory output.
std::vector<LearningCurvePoint> sweep_istdp(const ExperimentSetup& setup,
                                            const std::vector<DeltaT>& delta_ts,
                                            int jobs = 1);

std::vector<DaSweepPoint> sweep_da_stdp(const ExperimentSetup& setup,
                                        const std::vector<DaSetting>& settings,
                                        DeltaT fixed_delta_t = DeltaT{2e-3}, int jobs = 1);

std::vector<DaSweepPoint> sweep_da_istdp(const ExperimentSetup& setup,
                                         const std::vector<DaSetting>& settings,
                                         DeltaT fixed_delta_t = DeltaT{2e-3}, int jobs = 1);

/// Fig. 6 / Fig. 7 potentiometer splits.
std::vector<DaSetting> default_da_stdp_settings();  // 0/50, 25/25, 37.5/12.5, 50/0 kOhm
std::vector<DaSetting> default_da_istdp_settings(); // 0/1M, 250/750k, 500/500k, 750/250k

/// Parse "a/b ..." into a/(a+b). Throws on malformed labels.
double wiper_from_pot_label(const std::string& label);

struct ConductanceProtocol {
    Trace da_schedule; // wiper level per step, dimensionless
    SpikeTrain pre;
    SpikeTrain post;
};

/// Stepped low->high DA schedule over `duration` with phase-shifted
/// periodic pre/post trains sweeping delta_t through a positive range.
ConductanceProtocol default_conductance_protocol(const ExperimentSetup& setup,
                                                 double duration = 1.0,
                                                 double wiper_low = 0.25,
                                                 double wiper_high = 1.0);

/// Run the open-loop rig, modulate the raw learning output per-sample by
/// the DA schedule, and fold the result into the memristor.
ConductanceRun run_conductance_experiment(const ExperimentSetup& setup,
                                          const Trace& da_schedule, const SpikeTrain& pre,
                                          const SpikeTrain& post);

/// Signed extremum of a trace over [t_lo, t_hi] (clipped to the grid);
/// the earliest sample wins magnitude ties.
double signed_extremum(const Trace& trace, double t_lo, double t_hi);

} // namespace memsim
