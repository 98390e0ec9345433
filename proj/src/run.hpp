// run.hpp: dispatch of a validated configuration to the compute modules

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace dicke::app {

struct RunSummary {
    std::filesystem::path out_dir;
    std::vector<std::string> files;   // manifest.json excluded
};

// Validates cfg, then writes every output plus manifest.json into cfg.out_dir. Nothing
// is written when validation fails.
RunSummary run(const RunConfig& cfg, const std::string& command_line);

// Exit status for an exception escaping run(): 2 for configuration and argument
// errors, 3 for numeric failures, 1 otherwise.
int exit_code_for(const std::exception& e);

} // namespace dicke::app
