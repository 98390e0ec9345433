#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dicke/meanfield.hpp"

namespace dicke::app {

namespace {

const std::vector<std::pair<Mode, const char*>> mode_names{
    {Mode::steady_state, "steady-state"}, {Mode::evolve, "evolve"},       {Mode::spectrum, "spectrum"},
    {Mode::photon_flux, "photon-flux"},   {Mode::g2, "g2"},               {Mode::g2_map, "g2-map"},
    {Mode::modulate, "modulate"},         {Mode::map_params, "map-params"}, {Mode::reproduce_figure, "reproduce-figure"}};

std::string where(const YAML::Node& n, const std::string& key) {
    std::ostringstream os;
    os << "key '" << key << "'";
    const auto m = n.Mark();
    if (m.line >= 0) os << " (line " << m.line + 1 << ", column " << m.column + 1 << ")";
    return os.str();
}

[[noreturn]] void fail(const YAML::Node& n, const std::string& key, const std::string& what) {
    throw ConfigError(where(n, key) + ": " + what);
}

void check_keys(const YAML::Node& map, const std::string& path, const std::set<std::string>& allowed) {
    if (!map.IsMap()) fail(map, path, "expected a mapping");
    for (const auto& kv : map) {
        const auto k = kv.first.as<std::string>();
        if (!allowed.count(k)) fail(kv.first, path.empty() ? k : path + "." + k, "unknown key");
    }
}

double number(const YAML::Node& n, const std::string& key) {
    if (!n.IsScalar()) fail(n, key, "expected a number");
    try {
        return n.as<double>();
    } catch (const YAML::Exception&) {
        fail(n, key, "expected a number, got '" + n.Scalar() + "'");
    }
}

std::size_t count(const YAML::Node& n, const std::string& key) {
    const double v = number(n, key);
    if (!(v >= 1) || v != std::floor(v)) fail(n, key, "expected a positive integer");
    return static_cast<std::size_t>(v);
}

bool boolean(const YAML::Node& n, const std::string& key) {
    try {
        return n.as<bool>();
    } catch (const YAML::Exception&) {
        fail(n, key, "expected true or false");
    }
}

std::string text(const YAML::Node& n, const std::string& key) {
    if (!n.IsScalar()) fail(n, key, "expected a string");
    return n.Scalar();
}

std::complex<double> complex_pair(const YAML::Node& n, const std::string& key) {
    if (n.IsScalar()) return {number(n, key), 0.0};
    if (!n.IsSequence() || n.size() != 2) fail(n, key, "expected a number or [re, im]");
    return {number(n[0], key + "[0]"), number(n[1], key + "[1]")};
}

void read_if(const YAML::Node& map, const char* k, const std::string& path, double& out) {
    if (const auto n = map[k]) out = number(n, path + "." + k);
}

// Grid node: explicit list, or {start, stop, count, scale, relative}.
struct GridSpec {
    std::vector<double> values;
    bool relative{false};
    const YAML::Node* node{nullptr};
};

GridSpec grid(const YAML::Node& n, const std::string& key) {
    GridSpec g;
    if (n.IsSequence()) {
        for (std::size_t i = 0; i < n.size(); ++i) g.values.push_back(number(n[i], key + "[" + std::to_string(i) + "]"));
        return g;
    }
    check_keys(n, key, {"start", "stop", "count", "scale", "relative", "values"});
    if (n["values"]) {
        g = grid(n["values"], key + ".values");
    } else {
        if (!n["start"] || !n["stop"] || !n["count"]) fail(n, key, "needs start, stop and count (or values)");
        const double a = number(n["start"], key + ".start");
        const double b = number(n["stop"], key + ".stop");
        const std::size_t c = count(n["count"], key + ".count");
        const std::string scale = n["scale"] ? text(n["scale"], key + ".scale") : "linear";
        if (scale != "linear" && scale != "log") fail(n["scale"], key + ".scale", "expected linear or log");
        if (scale == "log" && !(a > 0 && b > 0)) fail(n, key, "log grid needs positive start and stop");
        for (std::size_t i = 0; i < c; ++i) {
            const double f = c == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(c - 1);
            g.values.push_back(scale == "log" ? a * std::pow(b / a, f) : a + (b - a) * f);
        }
    }
    if (n["relative"]) g.relative = boolean(n["relative"], key + ".relative");
    return g;
}

} // namespace

const char* to_string(Mode m) {
    for (const auto& [k, v] : mode_names) {
        if (k == m) return v;
    }
    return "?";
}

Mode parse_mode(const std::string& s) {
    for (const auto& [k, v] : mode_names) {
        if (s == v) return k;
    }
    throw ConfigError("unknown mode '" + s + "'");
}

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    if (s == "both") return Format::both;
    throw ConfigError("unknown output format '" + s + "' (expected csv, json or both)");
}

RunConfig parse_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(std::string("YAML parse error: ") + e.what());
    }
    RunConfig cfg;
    cfg.source_text = yaml_text;
    if (!root || root.IsNull()) return cfg;
    check_keys(root, "", {"mode", "figure", "params", "physical", "lambda_grid", "nu_grid", "tau", "evolve",
                          "modulation", "output", "workers"});

    if (const auto n = root["mode"]) cfg.mode = [&] {
        try {
            return parse_mode(text(n, "mode"));
        } catch (const ConfigError& e) {
            fail(n, "mode", e.what());
        }
    }();
    if (const auto n = root["figure"]) cfg.figure = text(n, "figure");

    if (const auto n = root["params"]) {
        check_keys(n, "params", {"omega", "omega0", "lambda", "lambda_prime", "kappa", "atom_number"});
        read_if(n, "omega", "params", cfg.params.omega);
        read_if(n, "omega0", "params", cfg.params.omega0);
        read_if(n, "lambda", "params", cfg.params.lambda);
        read_if(n, "lambda_prime", "params", cfg.params.lambda_prime);
        read_if(n, "kappa", "params", cfg.params.kappa);
        read_if(n, "atom_number", "params", cfg.params.atom_number);
        try {
            dicke::validate(cfg.params);
        } catch (const std::invalid_argument& e) {
            fail(n, "params", e.what());
        }
    }
    if (const auto n = root["physical"]) {
        if (root["params"]) fail(n, "physical", "give either params or physical, not both");
        check_keys(n, "physical", {"pump_cavity_detuning", "dispersive_shift", "pump_coupling", "cavity_decay",
                                   "atom_number", "condensate_length", "cavity_length", "trap_displacement",
                                   "cavity_wavevector", "atom_mass", "max_displacement_fraction",
                                   "atom_cavity_coupling", "pump_rabi_frequency", "atomic_detuning"});
        PhysicalParamsd ph;
        read_if(n, "pump_cavity_detuning", "physical", ph.pump_cavity_detuning);
        read_if(n, "dispersive_shift", "physical", ph.dispersive_shift);
        read_if(n, "pump_coupling", "physical", ph.pump_coupling);
        read_if(n, "cavity_decay", "physical", ph.cavity_decay);
        read_if(n, "atom_number", "physical", ph.atom_number);
        read_if(n, "condensate_length", "physical", ph.condensate_length);
        read_if(n, "cavity_length", "physical", ph.cavity_length);
        read_if(n, "trap_displacement", "physical", ph.trap_displacement);
        read_if(n, "cavity_wavevector", "physical", ph.cavity_wavevector);
        read_if(n, "atom_mass", "physical", ph.atom_mass);
        read_if(n, "max_displacement_fraction", "physical", ph.max_displacement_fraction);
        if (const auto v = n["atom_cavity_coupling"]) ph.atom_cavity_coupling = number(v, "physical.atom_cavity_coupling");
        if (const auto v = n["pump_rabi_frequency"]) ph.pump_rabi_frequency = number(v, "physical.pump_rabi_frequency");
        if (const auto v = n["atomic_detuning"]) ph.atomic_detuning = number(v, "physical.atomic_detuning");
        try {
            cfg.params = map_to_dicke(ph);
        } catch (const std::invalid_argument& e) {
            fail(n, "physical", e.what());
        }
        cfg.physical = ph;
    }

    const double lc = critical_coupling(cfg.params);
    if (const auto n = root["lambda_grid"]) {
        auto g = grid(n, "lambda_grid");
        if (g.relative) {
            for (double& v : g.values) v *= lc;
        }
        if (g.values.empty()) fail(n, "lambda_grid", "grid is empty");
        if (!std::is_sorted(g.values.begin(), g.values.end())) fail(n, "lambda_grid", "grid must be sorted ascending");
        cfg.lambda_grid = g.values;
    }
    if (const auto n = root["nu_grid"]) {
        auto g = grid(n, "nu_grid");
        if (g.relative) {
            for (double& v : g.values) v *= cfg.params.omega0;
        }
        if (g.values.empty()) fail(n, "nu_grid", "grid is empty");
        if (!std::is_sorted(g.values.begin(), g.values.end())) fail(n, "nu_grid", "grid must be sorted ascending");
        cfg.nu_grid = g.values;
    }
    if (const auto n = root["tau"]) {
        check_keys(n, "tau", {"span", "count"});
        if (n["span"]) {
            cfg.tau_span = number(n["span"], "tau.span");
            if (!(*cfg.tau_span > 0)) fail(n["span"], "tau.span", "must be positive");
        }
        if (n["count"]) cfg.tau_count = count(n["count"], "tau.count");
    }
    if (const auto n = root["evolve"]) {
        check_keys(n, "evolve", {"t_max", "samples", "rtol", "initial"});
        read_if(n, "t_max", "evolve", cfg.t_max);
        if (n["samples"]) cfg.samples = count(n["samples"], "evolve.samples");
        read_if(n, "rtol", "evolve", cfg.rtol);
        if (const auto i = n["initial"]) {
            check_keys(i, "evolve.initial", {"alpha", "beta", "w"});
            cfg.initial = MeanFieldStated::normal(cfg.params.atom_number);
            if (i["alpha"]) cfg.initial.alpha = complex_pair(i["alpha"], "evolve.initial.alpha");
            if (i["beta"]) cfg.initial.beta = complex_pair(i["beta"], "evolve.initial.beta");
            if (i["w"]) cfg.initial.w = number(i["w"], "evolve.initial.w");
            cfg.initial_set = true;
        }
        if (!(cfg.t_max > 0)) fail(n, "evolve.t_max", "must be positive");
        if (!(cfg.rtol > 0)) fail(n, "evolve.rtol", "must be positive");
    }
    if (const auto n = root["modulation"]) {
        check_keys(n, "modulation", {"depth", "t_max", "transient_fraction", "seed_alpha", "seed_beta", "rtol",
                                     "stationarity_tolerance", "series"});
        read_if(n, "depth", "modulation", cfg.depth);
        read_if(n, "t_max", "modulation", cfg.driven.t_max);
        read_if(n, "transient_fraction", "modulation", cfg.driven.transient_fraction);
        read_if(n, "rtol", "modulation", cfg.driven.rtol);
        read_if(n, "stationarity_tolerance", "modulation", cfg.driven.stationarity_tolerance);
        if (n["seed_alpha"]) cfg.driven.seed_alpha = complex_pair(n["seed_alpha"], "modulation.seed_alpha");
        if (n["seed_beta"]) cfg.driven.seed_beta = complex_pair(n["seed_beta"], "modulation.seed_beta");
        if (!(cfg.depth > 0 && cfg.depth < 0.2)) fail(n, "modulation.depth", "must lie in (0, 0.2)");
        if (!(cfg.driven.t_max > 0)) fail(n, "modulation.t_max", "must be positive");
        if (!(cfg.driven.transient_fraction >= 0 && cfg.driven.transient_fraction < 1)) {
            fail(n, "modulation.transient_fraction", "must lie in [0, 1)");
        }
        if (const auto s = n["series"]) {
            check_keys(s, "modulation.series", {"lambda_over_critical", "nu", "t_max", "samples"});
            SeriesRequest r;
            read_if(s, "lambda_over_critical", "modulation.series", r.lambda_over_critical);
            read_if(s, "nu", "modulation.series", r.nu);
            read_if(s, "t_max", "modulation.series", r.t_max);
            if (s["samples"]) r.samples = count(s["samples"], "modulation.series.samples");
            cfg.series = r;
        }
    }
    if (const auto n = root["output"]) {
        check_keys(n, "output", {"dir", "format", "plots"});
        if (n["dir"]) cfg.out_dir = text(n["dir"], "output.dir");
        if (n["format"]) {
            try {
                cfg.format = parse_format(text(n["format"], "output.format"));
            } catch (const ConfigError& e) {
                fail(n["format"], "output.format", e.what());
            }
        }
        if (n["plots"]) cfg.plots = boolean(n["plots"], "output.plots");
    }
    if (const auto n = root["workers"]) cfg.workers = count(n, "workers");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate(const RunConfig& cfg) {
    auto need_lambda_grid = [&] {
        if (cfg.lambda_grid.empty()) throw ConfigError(std::string(to_string(cfg.mode)) + ": lambda_grid is required and must be non-empty");
    };
    switch (cfg.mode) {
    case Mode::steady_state:
    case Mode::spectrum:
    case Mode::photon_flux:
    case Mode::g2_map:
        need_lambda_grid();
        break;
    case Mode::modulate:
        need_lambda_grid();
        if (cfg.nu_grid.empty()) throw ConfigError("modulate: nu_grid is required and must be non-empty");
        break;
    case Mode::map_params:
        if (!cfg.physical) throw ConfigError("map-params: a physical block is required");
        break;
    case Mode::reproduce_figure:
        if (cfg.figure.empty()) throw ConfigError("reproduce-figure: figure id is required (fig1..fig5)");
        if (cfg.figure != "fig1" && cfg.figure != "fig2" && cfg.figure != "fig3" && cfg.figure != "fig4" &&
            cfg.figure != "fig5") {
            throw ConfigError("reproduce-figure: unknown figure '" + cfg.figure + "' (expected fig1..fig5)");
        }
        if (cfg.figure == "fig5" && !cfg.physical) {
            throw ConfigError("reproduce-figure fig5: a physical block is required for panels (c) and (d)");
        }
        break;
    case Mode::evolve:
    case Mode::g2:
        break;
    }
    if (cfg.workers == 0) throw ConfigError("workers must be at least 1");
}

} // namespace dicke::app
