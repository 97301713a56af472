#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "citescan/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"citescan - candidate-versus-commission citation network pipeline"};
    app.require_subcommand(0, 1);

    std::string config_path;
    std::string out_override;
    std::uint64_t seed_override = 0;
    bool seed_set = false;

    std::string command;
    for (const char* name : {"ingest", "resolve", "metrics", "sweep", "report", "synth"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "configuration file")->required();
        sub->add_option("--out", out_override, "override output_dir");
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t v) { seed_override = v; seed_set = true; },
            "override the sweep seed");
        sub->callback([&, name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: E_USAGE " << e.what() << "\n";
        std::cerr << app.help();
        return kExitUsage;
    }
    if (command.empty()) {
        std::cerr << "error: E_USAGE no command given (expected one of: ingest, resolve, "
                     "metrics, sweep, report, synth)\n";
        std::cerr << app.help();
        return kExitUsage;
    }

    try {
        citescan::PipelineConfig config = citescan::PipelineConfig::load(config_path);
        if (!out_override.empty()) config.output_dir = out_override;
        if (seed_set) {
            config.sweep.seed = seed_override;
            config.synth.seed = seed_override;
        }
        citescan::run_stage(command, config);
        return kExitOk;
    } catch (const citescan::UsageError& e) {
        std::cerr << "error: E_CONFIG " << e.what() << "\n";
        return kExitUsage;
    } catch (const citescan::MissingInputError& e) {
        std::cerr << "error: E_MISSING_INPUT " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: E_RUNTIME " << e.what() << "\n";
        return kExitRuntime;
    }
}
