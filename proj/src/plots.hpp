// plots.hpp: matplotlib scripts that render the emitted tables

#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace dicke::app {

// Script for a figure bundle; run it from the output directory. Tables load from CSV,
// or from JSON when only JSON was written.
std::string figure_plot_script(const std::string& figure_id);

// Line plot of every CSV table of a single-mode run against its first column.
std::string generic_plot_script(const std::vector<std::string>& csv_files);

} // namespace dicke::app
