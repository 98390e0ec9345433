// dicke: command-line front end for the open Dicke model toolkit

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "config.hpp"
#include "output.hpp"
#include "run.hpp"

using namespace dicke::app;

int main(int argc, char** argv) {
    CLI::App app{"Open Dicke model: steady states, fluctuations, correlations and modulation"};
    app.set_version_flag("--version", std::string(tool_version()));
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::size_t> workers;
    std::optional<std::string> format;
    bool plots = false;
    std::string figure;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "YAML configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        sub->add_option("--workers", workers, "worker threads for grid sweeps (0 = all cores)");
        sub->add_option("--format", format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
        sub->add_flag("--plots", plots, "also write a matplotlib script");
    };

    const std::vector<std::pair<std::string, std::string>> modes{
        {"run", "run the mode named in the config file"},
        {"steady-state", "steady states and their stability over lambda_grid"},
        {"evolve", "integrate the mean-field equations"},
        {"spectrum", "fluctuation eigenfrequencies over lambda_grid"},
        {"photon-flux", "photon number and output flux over lambda_grid"},
        {"g2", "second-order correlation g2(tau) at params.lambda"},
        {"g2-map", "g2(tau) and its spectrum over lambda_grid"},
        {"modulate", "driven response over lambda_grid x nu_grid"},
        {"map-params", "map a physical block onto Dicke parameters"},
        {"reproduce-figure", "reproduce one figure: fig1..fig5"}};
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : modes) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub);
        if (name == "reproduce-figure") sub->add_option("figure", figure, "figure id")->required();
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::string command_line;
    for (int i = 0; i < argc; ++i) {
        if (i) command_line += ' ';
        command_line += argv[i];
    }

    try {
        RunConfig cfg = config_path.empty() ? parse_config("") : load_config(config_path);
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub != "run") cfg.mode = parse_mode(sub);
        if (cfg.mode == Mode::reproduce_figure && !figure.empty()) cfg.figure = figure;
        if (out_dir) cfg.out_dir = *out_dir;
        if (workers) cfg.workers = *workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : *workers;
        if (format) cfg.format = parse_format(*format);
        if (plots) cfg.plots = true;

        const auto summary = run(cfg, command_line);
        std::cout << "wrote " << summary.files.size() + 1 << " files to " << summary.out_dir.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "dicke: error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}
