#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "memsim/cli.hpp"

// Exit codes: 0 success, 1 usage/config error, 2 runtime error.
int main(int argc, char** argv) {
    CLI::App app{"memsim — behavioral memristive-neuron circuit simulator"};
    app.require_subcommand(1);

    memsim::RunManifest manifest;
    std::string command_name;
    for (const char* name : {"simulate", "sweep-stdp", "sweep-istdp", "sweep-da-stdp",
                             "sweep-da-istdp", "conductance", "dump-netlist"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", manifest.config_path, "TOML configuration file");
        sub->add_option("--out", manifest.out_dir, "output directory")->required();
        sub->add_flag("--svg", manifest.emit_svg, "also write SVG plots");
        sub->add_option("--jobs", manifest.jobs, "sweep worker threads")
            ->check(CLI::PositiveNumber);
        sub->callback([&command_name, name] { command_name = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        manifest.command = memsim::command_from_name(command_name);
        for (const auto& path : memsim::run_manifest(manifest))
            std::printf("wrote %s\n", path.c_str());
        return 0;
    } catch (const memsim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return 2;
    }
}
