// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, not configurable.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "memsim/blocks.hpp"
#include "memsim/cli.hpp"
#include "memsim/csv.hpp"
#include "memsim/engine.hpp"
#include "memsim/experiments.hpp"
#include "memsim/memristor.hpp"

using namespace memsim;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int criterion, const char* name, bool ok, const std::string& detail) {
    std::printf("%s  criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, name,
                detail.c_str());
    if (!ok) ++failures;
}

// Spearman rank correlation; assumes no ties within either sequence.
double rank_correlation(const std::vector<double>& a, const std::vector<double>& b) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

void criterion_1_stdp() {
    const auto t0 = Clock::now();
    ExperimentSetup setup;
    const auto points = sweep_stdp(setup, default_delta_ts());
    bool ok = true;
    std::string why;

    for (const auto& p : points)
        if (p.dw * p.delta_t.value <= 0.0) {
            ok = false;
            why = "sign(dw) != sign(delta_t) at " + format_double(p.delta_t.value);
        }

    // |dw| strictly decreasing in |delta_t|: fold the two branches into
    // per-|delta_t| means, ordered small to large.
    std::map<double, std::vector<double>> by_abs;
    for (const auto& p : points) by_abs[std::abs(p.delta_t.value)].push_back(std::abs(p.dw));
    std::vector<double> mags, inv_dt;
    for (const auto& [abs_dt, dws] : by_abs) {
        mags.push_back((dws[0] + dws[1]) / 2.0);
        inv_dt.push_back(1.0 / abs_dt);
    }
    for (std::size_t i = 1; i < mags.size(); ++i)
        if (!(mags[i] < mags[i - 1])) {
            ok = false;
            why = "|dw| not strictly decreasing in |delta_t|";
        }
    const double rho = rank_correlation(mags, inv_dt);
    if (!(rho >= 0.95)) {
        ok = false;
        why = "rank correlation " + format_double(rho) + " < 0.95";
    }

    const double elapsed = seconds_since(t0);
    if (elapsed >= 10.0) {
        ok = false;
        why = "runtime " + format_double(elapsed) + "s >= 10s";
    }
    if (ok)
        why = "rank corr " + format_double(rho) + ", " + format_double(elapsed) + "s";
    report(1, "STDP shape: sign(dt), 1/|dt| decay", ok, why);
}

void criterion_2_istdp() {
    const auto t0 = Clock::now();
    ExperimentSetup setup;
    const auto points = sweep_istdp(setup, default_delta_ts());
    bool ok = true;
    std::string why;

    std::map<double, double> by_dt;
    double peak = 0.0;
    for (const auto& p : points) {
        by_dt[p.delta_t.value] = p.dw;
        peak = std::max(peak, std::abs(p.dw));
    }
    double worst_asym = 0.0;
    for (const auto& [dt, dw] : by_dt)
        if (dt > 0.0) worst_asym = std::max(worst_asym, std::abs(dw - by_dt.at(-dt)));
    if (!(worst_asym <= 0.05 * peak)) {
        ok = false;
        why = "asymmetry " + format_double(worst_asym) + " > 5% of peak";
    }
    // Maximum must sit at the smallest |delta_t| swept (+-1 ms).
    const double at_min = std::max(std::abs(by_dt.at(1e-3)), std::abs(by_dt.at(-1e-3)));
    if (!(at_min == peak)) {
        ok = false;
        why = "maximum not at the smallest |delta_t|";
    }

    const double elapsed = seconds_since(t0);
    if (elapsed >= 10.0) {
        ok = false;
        why = "runtime " + format_double(elapsed) + "s >= 10s";
    }
    if (ok)
        why = "asym " + format_double(worst_asym / peak * 100.0) + "% of peak, " +
              format_double(elapsed) + "s";
    report(2, "iSTDP shape: even, peaked at coincidence", ok, why);
}

void check_da(int criterion, const char* name,
              const std::vector<DaSweepPoint>& points, Clock::time_point t0) {
    bool ok = points.size() == 4;
    std::string why = ok ? "" : "expected 4 settings";
    for (std::size_t i = 1; ok && i < points.size(); ++i)
        if (!(points[i].peak_amplitude > points[i - 1].peak_amplitude)) {
            ok = false;
            why = "amplitudes not strictly increasing at index " + std::to_string(i);
        }
    const double elapsed = seconds_since(t0);
    if (elapsed >= 5.0) {
        ok = false;
        why = "runtime " + format_double(elapsed) + "s >= 5s";
    }
    if (ok) {
        why = "peaks";
        for (const auto& p : points) why += " " + format_double(p.peak_amplitude);
        why += " V, " + format_double(elapsed) + "s";
    }
    report(criterion, name, ok, why);
}

void criterion_3_da_stdp() {
    const auto t0 = Clock::now();
    ExperimentSetup setup;
    check_da(3, "DA-STDP amplitudes strictly increasing",
             sweep_da_stdp(setup, default_da_stdp_settings()), t0);
}

void criterion_4_da_istdp() {
    const auto t0 = Clock::now();
    ExperimentSetup setup;
    check_da(4, "DA-iSTDP amplitudes strictly increasing",
             sweep_da_istdp(setup, default_da_istdp_settings()), t0);
}

void criterion_5_conductance() {
    const auto t0 = Clock::now();
    ExperimentSetup setup; // dt = 1 us
    const auto proto = default_conductance_protocol(setup, 1.0, 0.25, 1.0);
    const auto run = run_conductance_experiment(setup, proto.da_schedule, proto.pre,
                                                proto.post);
    bool ok = true;
    std::string why;

    for (double g : run.g_trace.values)
        if (!(g > setup.memristor.g_min && g < setup.memristor.g_max)) {
            ok = false;
            why = "conductance left (g_min, g_max)";
            break;
        }

    const std::size_t n = run.g_trace.values.size();
    const std::size_t half = n / 2;
    const double low_slope =
        (run.g_trace.values[half - 1] - run.g_trace.values.front()) /
        (static_cast<double>(half - 1) * setup.dt);
    const double high_slope =
        (run.g_trace.values[n - 1] - run.g_trace.values[half]) /
        (static_cast<double>(n - 1 - half) * setup.dt);
    if (!(high_slope >= 2.0 * low_slope) || !(low_slope > 0.0)) {
        ok = false;
        why = "high-DA slope " + format_double(high_slope) + " not >= 2x low-DA slope " +
              format_double(low_slope);
    }

    const double elapsed = seconds_since(t0);
    if (elapsed >= 20.0) {
        ok = false;
        why = "runtime " + format_double(elapsed) + "s >= 20s";
    }
    if (ok)
        why = "slope ratio " + format_double(high_slope / low_slope) + ", " +
              format_double(elapsed) + "s";
    report(5, "conductance run: high DA learns >= 2x faster", ok, why);
}

void criterion_6_block_oracles() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string why;

    // One-shot pulse width within one dt of T1 over 50 random component sets.
    {
        std::mt19937 rng(101);
        std::uniform_real_distribution<double> c3(0.05e-6, 0.5e-6);
        std::uniform_real_distribution<double> r(1e3, 20e3);
        const double dt = 1e-5;
        for (int trial = 0; trial < 50 && ok; ++trial) {
            const double t1 = one_shot_duration(c3(rng), r(rng), r(rng), r(rng));
            if (t1 < dt) continue;
            OneShotState s;
            s.pulse_width = t1;
            int high = 0;
            auto out = one_shot_step(s, s.v_threshold, dt);
            s = out.state;
            if (out.y != 0.0) ++high;
            while (s.phase == OneShotState::Phase::firing) {
                out = one_shot_step(s, 0.0, dt);
                s = out.state;
                if (out.y != 0.0) ++high;
            }
            if (std::abs(high * dt - t1) >= dt) {
                ok = false;
                why = "one-shot width off by >= dt on trial " + std::to_string(trial);
            }
        }
    }

    // Integrator step response vs the closed form, 1e-9 at grid points.
    if (ok) {
        IntegratorState s{0.0, 1e-3};
        const double dt = 1e-6;
        for (int k = 0; k < 10000; ++k) {
            s = integrator_step(s, 1.0, dt, 12.0);
            const double want = 1.0 - std::exp(-(k + 1) * dt / s.tau);
            if (std::abs(s.y - want) >= 1e-9) {
                ok = false;
                why = "integrator deviates from the closed form at step " + std::to_string(k);
                break;
            }
        }
    }

    // Memristor fold vs a dt/100 forward-Euler oracle, 0.5% on 100 trains.
    if (ok) {
        std::mt19937 rng(103);
        std::uniform_real_distribution<double> level(-2.0, 2.0);
        std::uniform_int_distribution<int> hold(3, 25);
        const TimeGrid grid{0.0, 1e-3, 200};
        for (int trial = 0; trial < 100 && ok; ++trial) {
            Trace tr{grid, {}, Unit::volt};
            while (tr.values.size() < grid.n_steps) {
                const double v = level(rng);
                for (int k = hold(rng); k > 0 && tr.values.size() < grid.n_steps; --k)
                    tr.values.push_back(v);
            }
            MemristorState s;
            const double got = memristor_drive(s, tr).state.g;
            double g = s.g;
            const double half = (s.g_max - s.g_min) / 2.0;
            const double h = grid.dt / 100.0;
            for (double v : tr.values) {
                double od = 0.0;
                if (v > s.v_th_set)
                    od = v - s.v_th_set;
                else if (v < s.v_th_reset)
                    od = v - s.v_th_reset;
                if (od == 0.0) continue;
                for (int i = 0; i < 100; ++i) {
                    const double w = (s.g_max - g) * (g - s.g_min) / (half * half);
                    g = std::clamp(g + s.mu * od * w * h, s.g_min, s.g_max);
                }
            }
            if (!(std::abs(got - g) / g < 0.005)) {
                ok = false;
                why = "memristor fold off by >= 0.5% on trial " + std::to_string(trial);
            }
        }
    }

    if (ok) why = format_double(seconds_since(t0)) + "s";
    report(6, "block-level oracles (one-shot, integrator, memristor)", ok, why);
}

void criterion_7_determinism() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string why;
    const auto base = std::filesystem::temp_directory_path() / "memsim_acceptance";
    std::filesystem::remove_all(base);
    const Command commands[] = {Command::simulate,       Command::sweep_stdp,
                                Command::sweep_istdp,    Command::sweep_da_stdp,
                                Command::sweep_da_istdp, Command::conductance,
                                Command::dump_netlist};
    for (Command cmd : commands) {
        if (!ok) break;
        std::vector<std::vector<std::string>> written(2);
        for (int rep = 0; rep < 2; ++rep) {
            RunManifest m;
            m.command = cmd;
            m.out_dir = (base / ("cmd" + std::to_string(static_cast<int>(cmd)) + "_" +
                                 std::to_string(rep)))
                            .string();
            m.emit_svg = true;
            m.jobs = 2;
            written[rep] = run_manifest(m);
        }
        if (written[0].size() != written[1].size()) {
            ok = false;
            why = "file count differs between reruns";
            break;
        }
        for (std::size_t i = 0; i < written[0].size(); ++i)
            if (read_text_file(written[0][i]) != read_text_file(written[1][i])) {
                ok = false;
                why = "rerun output differs: " +
                      std::filesystem::path(written[0][i]).filename().string();
            }
    }
    std::filesystem::remove_all(base);
    if (ok) why = "all 7 commands byte-identical, " + format_double(seconds_since(t0)) + "s";
    report(7, "byte-identical outputs on rerun", ok, why);
}

void criterion_8_performance(Clock::time_point suite_start) {
    bool ok = true;
    std::string why;

    NeuronNetlist nl = build_standard_netlist({}, {}, LoopMode::open_loop);
    nl.trains["gen_tpre"] = SpikeTrain{{30e-3}, 100e-6, 5.0};
    nl.trains["gen_tpost"] = SpikeTrain{{32e-3}, 100e-6, 5.0};
    SimConfig cfg{TimeGrid{0.0, 1e-6, 1000000}, {"mod_hebb", "mod_inh", "u7", "u11"}};
    const auto t0 = Clock::now();
    SimResult res = run(nl, cfg);
    const double sim_s = seconds_since(t0);
    if (res.traces.size() != 4) {
        ok = false;
        why = "unexpected probe count";
    }
    if (sim_s >= 2.0) {
        ok = false;
        why = "1e6-step simulation took " + format_double(sim_s) + "s >= 2s";
    }

    const double total = seconds_since(suite_start);
    if (total >= 90.0) {
        ok = false;
        why = "acceptance suite took " + format_double(total) + "s >= 90s";
    }
    if (ok)
        why = "1e6 steps in " + format_double(sim_s) + "s, suite " + format_double(total) +
              "s";
    report(8, "performance budget", ok, why);
}

} // namespace

int main() {
    const auto suite_start = Clock::now();
    criterion_1_stdp();
    criterion_2_istdp();
    criterion_3_da_stdp();
    criterion_4_da_istdp();
    criterion_5_conductance();
    criterion_6_block_oracles();
    criterion_7_determinism();
    criterion_8_performance(suite_start);
    if (failures) {
        std::printf("%d criterion(s) FAILED\n", failures);
        return 1;
    }
    std::printf("all 8 criteria passed\n");
    return 0;
}
