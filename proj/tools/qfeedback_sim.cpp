// qfeedback-sim — scenario runner for the cavity-mediated two-qubit
// coherent feedback network.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qfn/errors.hpp"
#include "qfn/scenario.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    int workers = 1;
};

int run_scenario(const CliOptions& opts, const std::string& subcommand) {
    nlohmann::json raw;
    {
        std::ifstream in(opts.config_path);
        if (!in) {
            std::cerr << "error: cannot open config file " << opts.config_path << "\n";
            return 2;
        }
        try {
            in >> raw;
        } catch (const std::exception& e) {
            std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
            return 2;
        }
    }

    // The subcommand pins the scenario; a config's own field must agree.
    if (!subcommand.empty() && subcommand != "sweep") {
        std::string expected = subcommand;
        for (char& c : expected) {
            if (c == '-') c = '_';
        }
        if (raw.contains("scenario") &&
            raw.at("scenario").get<std::string>() != expected) {
            std::cerr << "error: config declares scenario '"
                      << raw.at("scenario").get<std::string>()
                      << "' but the subcommand requested '" << expected << "'\n";
            return 2;
        }
        raw["scenario"] = expected;
    }

    qfn::ScenarioConfig config;
    try {
        config = qfn::validate_config(raw);
    } catch (const qfn::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (subcommand == "sweep" && !config.sweep) {
        std::cerr << "error: the sweep subcommand needs a 'sweep' block in the config\n";
        return 2;
    }

    std::string out_dir = opts.out_dir;
    if (out_dir.empty()) out_dir = config.output_dir;
    if (out_dir.empty()) {
        if (const char* env = std::getenv(qfn::kOutputDirEnvVar)) out_dir = env;
    }
    if (out_dir.empty()) out_dir = ".";

    try {
        const qfn::RunManifest manifest = qfn::run(config, out_dir, opts.workers);
        for (const auto& file : manifest.output_files) {
            std::cout << out_dir << "/" << file << "\n";
        }
        std::cout << out_dir << "/manifest.json\n";
    } catch (const qfn::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qfn::SimulationError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator for a coherent feedback network of two cavity-coupled "
                 "charge qubits"};
    app.require_subcommand(1);

    CliOptions opts;
    std::string invoked;
    for (const char* name : {"pulse-response", "stability", "excitation",
                             "steady-state", "invert", "sweep"}) {
        CLI::App* sub = app.add_subcommand(name, "");
        sub->add_option("--config", opts.config_path, "scenario config JSON")
            ->required();
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--workers", opts.workers, "sweep worker count")
            ->check(CLI::PositiveNumber);
        sub->callback([name, &invoked]() { invoked = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    return run_scenario(opts, invoked);
}
