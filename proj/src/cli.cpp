#include "memsim/cli.hpp"

#include <cmath>
#include <filesystem>
#include <map>

#include "memsim/csv.hpp"
#include "memsim/engine.hpp"
#include "memsim/netlist_io.hpp"
#include "memsim/svg.hpp"

namespace memsim {

Command command_from_name(const std::string& name) {
    static const std::map<std::string, Command> table = {
        {"simulate", Command::simulate},
        {"sweep-stdp", Command::sweep_stdp},
        {"sweep-istdp", Command::sweep_istdp},
        {"sweep-da-stdp", Command::sweep_da_stdp},
        {"sweep-da-istdp", Command::sweep_da_istdp},
        {"conductance", Command::conductance},
        {"dump-netlist", Command::dump_netlist},
    };
    auto it = table.find(name);
    if (it == table.end()) throw ConfigError("unknown command '" + name + "'");
    return it->second;
}

namespace {

std::vector<DeltaT> delta_ts_from(const ExperimentSettings& exp) {
    if (exp.delta_ts.empty()) return default_delta_ts();
    std::vector<DeltaT> out;
    for (double v : exp.delta_ts) out.push_back(DeltaT{v});
    return out;
}

std::vector<SvgSeries> curve_series(const std::vector<LearningCurvePoint>& points,
                                    const std::string& name) {
    SvgSeries s{name, {}, {}};
    for (const auto& p : points) {
        s.x.push_back(p.delta_t.value);
        s.y.push_back(p.dw);
    }
    return {s};
}

std::vector<SvgSeries> da_series(const std::vector<DaSweepPoint>& points,
                                 const std::string& name) {
    SvgSeries s{name, {}, {}};
    for (const auto& p : points) {
        s.x.push_back(p.wiper);
        s.y.push_back(p.peak_amplitude);
    }
    return {s};
}

NeuronNetlist build_from_config(const FullConfig& cfg) {
    NeuronNetlist nl =
        build_standard_netlist(cfg.cv, cfg.mod, cfg.sim.mode, cfg.tuning, cfg.soma,
                               cfg.sim.oneshot_sense);
    nl.trains["gen_tpre"] =
        SpikeTrain{{cfg.t0}, cfg.spike_width, cfg.spike_amplitude};
    if (cfg.sim.mode == LoopMode::open_loop)
        nl.trains["gen_tpost"] = SpikeTrain{{cfg.t0 + cfg.experiment.da_delta_t},
                                            cfg.spike_width, cfg.spike_amplitude};
    return nl;
}

} // namespace

std::vector<std::string> run_manifest(const RunManifest& manifest) {
    if (manifest.jobs < 1) throw ConfigError("--jobs must be >= 1");

    FullConfig cfg;
    if (!manifest.config_path.empty()) {
        std::string text;
        try {
            text = read_text_file(manifest.config_path);
        } catch (const std::runtime_error& e) {
            throw ConfigError(e.what());
        }
        cfg = parse_config(text);
    }

    std::error_code ec;
    std::filesystem::create_directories(manifest.out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + manifest.out_dir);
    auto out_path = [&](const std::string& name) {
        return (std::filesystem::path(manifest.out_dir) / name).string();
    };

    const ExperimentSetup setup = cfg.setup();
    std::vector<std::string> written;
    auto emit = [&](const std::string& base, const std::string& csv,
                    const std::vector<SvgPanel>& panels, const std::string& x_label) {
        const std::string csv_path = out_path(base + ".csv");
        write_text_file(csv_path, csv);
        written.push_back(csv_path);
        if (manifest.emit_svg) {
            const std::string svg_path = out_path(base + ".svg");
            write_text_file(svg_path, render_svg(panels, x_label));
            written.push_back(svg_path);
        }
    };

    switch (manifest.command) {
    case Command::simulate: {
        NeuronNetlist nl = build_from_config(cfg);
        TimeGrid grid{0.0, cfg.sim.dt,
                      static_cast<std::size_t>(std::ceil(cfg.sim.duration / cfg.sim.dt))};
        SimResult res = run(nl, SimConfig{grid, cfg.sim.probes});
        std::map<std::string, Trace> sorted(res.traces.begin(), res.traces.end());
        SvgPanel panel{"probes (V)", {}};
        for (const auto& [id, tr] : sorted) {
            SvgSeries s{id, {}, tr.values};
            s.x.reserve(grid.n_steps);
            for (std::size_t k = 0; k < grid.n_steps; ++k) s.x.push_back(grid.time_at(k));
            panel.series.push_back(std::move(s));
        }
        emit("traces", traces_csv(sorted), {panel}, "time (s)");
        break;
    }
    case Command::sweep_stdp: {
        auto points = sweep_stdp(setup, delta_ts_from(cfg.experiment), manifest.jobs);
        emit("stdp", learning_curve_csv(points),
             {SvgPanel{"dw (V)", curve_series(points, "STDP")}}, "delta_t (s)");
        break;
    }
    case Command::sweep_istdp: {
        auto points = sweep_istdp(setup, delta_ts_from(cfg.experiment), manifest.jobs);
        emit("istdp", learning_curve_csv(points),
             {SvgPanel{"dw (V)", curve_series(points, "iSTDP")}}, "delta_t (s)");
        break;
    }
    case Command::sweep_da_stdp: {
        auto settings = cfg.experiment.da_settings.empty() ? default_da_stdp_settings()
                                                           : cfg.experiment.da_settings;
        auto points = sweep_da_stdp(setup, settings, DeltaT{cfg.experiment.da_delta_t},
                                    manifest.jobs);
        emit("da_stdp", da_sweep_csv(points),
             {SvgPanel{"peak (V)", da_series(points, "DA-STDP")}}, "wiper");
        break;
    }
    case Command::sweep_da_istdp: {
        auto settings = cfg.experiment.da_settings.empty() ? default_da_istdp_settings()
                                                           : cfg.experiment.da_settings;
        auto points = sweep_da_istdp(setup, settings, DeltaT{cfg.experiment.da_delta_t},
                                     manifest.jobs);
        emit("da_istdp", da_sweep_csv(points),
             {SvgPanel{"peak (V)", da_series(points, "DA-iSTDP")}}, "wiper");
        break;
    }
    case Command::conductance: {
        auto proto = default_conductance_protocol(setup, cfg.experiment.conductance_duration,
                                                  cfg.experiment.da_wiper_low,
                                                  cfg.experiment.da_wiper_high);
        auto result =
            run_conductance_experiment(setup, proto.da_schedule, proto.pre, proto.post);
        std::vector<double> times;
        times.reserve(result.da_trace.grid.n_steps);
        for (std::size_t k = 0; k < result.da_trace.grid.n_steps; ++k)
            times.push_back(result.da_trace.grid.time_at(k));
        // Three stacked panels: DA level, conductivity, learning impulses.
        std::vector<SvgPanel> panels = {
            SvgPanel{"DA level (wiper)", {SvgSeries{"DA", times, result.da_trace.values}}},
            SvgPanel{"conductance (S)", {SvgSeries{"G", times, result.g_trace.values}}},
            SvgPanel{"learning impulses (V)",
                     {SvgSeries{"pulses", times, result.pulse_trace.values}}}};
        emit("conductance", conductance_csv(result), panels, "time (s)");
        break;
    }
    case Command::dump_netlist: {
        NeuronNetlist nl = build_from_config(cfg);
        const std::string path = out_path("netlist.txt");
        write_text_file(path, dump_netlist(nl));
        written.push_back(path);
        break;
    }
    }
    return written;
}

} // namespace memsim
