// qsync — command-line front end for the spin synchronization toolkit

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qsync/cli.hpp"
#include "qsync/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spin synchronization toolkit: steady states, Husimi Q maps and phase-locking sweeps"};
    app.set_version_flag("--version", qsync::cli::kVersion);

    std::string command;
    std::string config_path;
    std::optional<std::string> output_dir;
    unsigned threads = 1;
    std::optional<double> spin, delta, epsilon, gamma_g, gamma_d;

    app.add_option("command", command, "Subcommand")
        ->required()
        ->check(CLI::IsMember(qsync::cli::commands()));
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--output-dir", output_dir, "Directory for generated files");
    app.add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_option("--spin", spin, "Override spin S");
    app.add_option("--delta", delta, "Override detuning (units of gamma_d)");
    app.add_option("--epsilon", epsilon, "Override signal strength (units of gamma_d)");
    app.add_option("--gamma-g", gamma_g, "Override gain rate (units of gamma_d)");
    app.add_option("--gamma-d", gamma_d, "Override damping rate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qsync::cli::kConfigError;
    }

    nlohmann::json doc = nlohmann::json::object();
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "config error: cannot read " << config_path << '\n';
            return qsync::cli::kConfigError;
        }
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return qsync::cli::kConfigError;
        }
    }
    if (spin) doc["spin"] = *spin;
    if (delta) doc["delta"] = *delta;
    if (epsilon) doc["epsilon"] = *epsilon;
    if (gamma_g) doc["gamma_g"] = *gamma_g;
    if (gamma_d) doc["gamma_d"] = *gamma_d;
    if (output_dir) doc["output"] = *output_dir;

    qsync::RunConfig cfg;
    try {
        cfg = qsync::parse_config(doc);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return qsync::cli::kConfigError;
    }
    return qsync::cli::run(command, cfg, threads, std::cerr);
}
