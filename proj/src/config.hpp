// config.hpp: run configuration for the dicke command-line tool

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicke/model.hpp"
#include "dicke/modulation.hpp"
#include "dicke/types.hpp"

namespace dicke::app {

// Bad configuration; the message names the key and, when known, its line and column.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Mode { steady_state, evolve, spectrum, photon_flux, g2, g2_map, modulate, map_params, reproduce_figure };

const char* to_string(Mode m);
Mode parse_mode(const std::string& s);   // throws ConfigError

enum class Format { csv, json, both };
Format parse_format(const std::string& s);

struct SeriesRequest {
    double lambda_over_critical{0.8};
    double nu{1.2};
    double t_max{2000};
    std::size_t samples{4001};
};

struct RunConfig {
    Mode mode{Mode::steady_state};
    std::string figure;                         // reproduce-figure only

    DickeParamsd params;
    std::optional<PhysicalParamsd> physical;    // mapped onto params when present

    std::vector<double> lambda_grid;            // absolute, in omega0
    std::vector<double> nu_grid;                // absolute, in omega0

    // tau grid for g2; unset fields fall back to the default grid
    std::optional<double> tau_span;
    std::optional<std::size_t> tau_count;

    // evolve
    MeanFieldStated initial;
    bool initial_set{false};
    double t_max{100};
    std::size_t samples{1001};
    double rtol{1e-10};

    // modulate
    double depth{0.02};
    DrivenOptions<double> driven;
    std::optional<SeriesRequest> series;

    std::string out_dir{"out"};
    Format format{Format::csv};
    bool plots{false};
    std::size_t workers{1};

    std::string source_text;                    // raw config text, hashed into the manifest
};

// Parses a YAML document. Grids given relative to the critical coupling are resolved
// against the (possibly mapped) DickeParams.
RunConfig parse_config(const std::string& yaml_text);
RunConfig load_config(const std::string& path);

// Empty grids, unsorted grids and missing required pieces for the selected mode.
void validate(const RunConfig& cfg);

} // namespace dicke::app
