// figures.hpp: canonical parameter sets and end-to-end figure reproduction

#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace dicke::app {

// One entry per figure; bump `revision` whenever a canonical value changes.
struct FigureSpec {
    std::string id;
    int revision{1};
    std::string description;
    DickeParamsd params;        // shared model parameters
    Json settings;              // figure-specific grids and couplings
    bool needs_physical{false};
};

const std::vector<FigureSpec>& figure_table();
const FigureSpec& figure_spec(const std::string& id);   // throws ConfigError for an unknown id

// Writes every panel of cfg.figure (and its plot script when cfg.plots is set).
void reproduce_figure(const RunConfig& cfg, OutputWriter& out);

} // namespace dicke::app
