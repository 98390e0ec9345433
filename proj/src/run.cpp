#include "run.hpp"

#include <algorithm>
#include <cmath>

#include "figures.hpp"
#include "output.hpp"
#include "plots.hpp"
#include "tables.hpp"

namespace dicke::app {

namespace {

MeanFieldStated default_initial(const DickeParamsd& p) {
    // normal state tilted by a small transverse spin component
    MeanFieldStated s;
    const double N = p.atom_number;
    s.alpha = 0;
    s.beta = 1e-3 * N;
    s.w = -std::sqrt(N * N / 4 - std::norm(s.beta));
    return s;
}

std::vector<double> tau_grid(const RunConfig& cfg, const LinearizedModel<double>& lm, std::vector<std::string>& warn) {
    if (!cfg.tau_span && !cfg.tau_count) {
        auto g = default_tau_grid(lm);
        warn.insert(warn.end(), g.warnings.begin(), g.warnings.end());
        return g.tau;
    }
    return linspace(0, cfg.tau_span.value_or(60.0), cfg.tau_count.value_or(4096));
}

Json run_json(const RunConfig& cfg) {
    Json j;
    j["mode"] = to_string(cfg.mode);
    if (!cfg.lambda_grid.empty()) j["lambda_grid"] = cfg.lambda_grid;
    if (!cfg.nu_grid.empty()) j["nu_grid"] = cfg.nu_grid;
    if (cfg.tau_span) j["tau_span"] = *cfg.tau_span;
    if (cfg.tau_count) j["tau_count"] = *cfg.tau_count;
    switch (cfg.mode) {
    case Mode::evolve:
        j["t_max"] = cfg.t_max;
        j["samples"] = cfg.samples;
        j["rtol"] = cfg.rtol;
        break;
    case Mode::modulate:
        j["depth"] = cfg.depth;
        j["t_max"] = cfg.driven.t_max;
        j["transient_fraction"] = cfg.driven.transient_fraction;
        j["seed_alpha"] = {cfg.driven.seed_alpha.real(), cfg.driven.seed_alpha.imag()};
        j["seed_beta"] = {cfg.driven.seed_beta.real(), cfg.driven.seed_beta.imag()};
        j["rtol"] = cfg.driven.rtol;
        j["stationarity_tolerance"] = cfg.driven.stationarity_tolerance;
        break;
    default:
        break;
    }
    return j;
}

void run_mode(const RunConfig& cfg, OutputWriter& out) {
    const auto& p = cfg.params;
    switch (cfg.mode) {
    case Mode::steady_state:
        out.write(steady_state_table("steady_states", p, steady_states(p, cfg.lambda_grid)));
        break;
    case Mode::evolve: {
        const auto s0 = cfg.initial_set ? cfg.initial : default_initial(p);
        const auto times = linspace(0, cfg.t_max, cfg.samples);
        out.write(trajectory_table("trajectory", p, integrate(s0, p, 0.0, cfg.t_max, cfg.rtol, times)));
        break;
    }
    case Mode::spectrum:
        out.write(spectrum_table("spectrum", p, cfg.lambda_grid));
        break;
    case Mode::photon_flux:
        out.write(photon_table("photon_flux", p, cfg.lambda_grid));
        break;
    case Mode::g2: {
        const auto lm = linearize(p);
        std::vector<std::string> warn;
        const auto tau = tau_grid(cfg, lm, warn);
        const auto s = g2(lm, tau);
        warn.insert(warn.end(), s.warnings.begin(), s.warnings.end());
        const auto sp = g2_spectrum(s);
        out.write(g2_series_table("g2", s));
        out.write(g2_spectrum_table("g2_spectrum", sp, cfg.nu_grid.empty() ? 3.0 : cfg.nu_grid.back()));
        out.write(g2_peaks_table("g2_peaks", sp, lm));
        for (const auto& w : warn) out.add_warning(w);
        break;
    }
    case Mode::g2_map: {
        const double dt = 0.125;
        const auto tau = cfg.tau_span || cfg.tau_count
                             ? linspace(0, cfg.tau_span.value_or(4095.875), cfg.tau_count.value_or(32768))
                             : linspace(0, dt * 32767, 32768);
        const double plot_max = cfg.tau_span ? *cfg.tau_span : 60.0;
        const auto r = g2_map("g2_map", p, cfg.lambda_grid, tau, plot_max,
                              cfg.nu_grid.empty() ? 3.0 : cfg.nu_grid.back(), cfg.workers);
        out.write(r.series);
        out.write(r.fft);
        out.write(r.peaks);
        for (const auto& w : r.warnings) out.add_warning(w);
        break;
    }
    case Mode::modulate: {
        const auto m = driven_response_map(p, cfg.lambda_grid, cfg.nu_grid, cfg.depth, cfg.driven, cfg.workers);
        out.write(driven_map_table("modulation_map", p, m, cfg.depth));
        out.write(driven_ridge_table("modulation_ridge", p, m));
        if (cfg.series) {
            const auto times = linspace(0, cfg.series->t_max, cfg.series->samples);
            const auto s = driven_time_series(p, cfg.series->lambda_over_critical * critical_coupling(p), cfg.depth,
                                              cfg.series->nu, times, cfg.driven);
            out.write(driven_series_table("modulation_series", s));
        }
        break;
    }
    case Mode::map_params:
        out.write(mapping_table("mapping", *cfg.physical));
        break;
    case Mode::reproduce_figure:
        break;
    }
}

} // namespace

RunSummary run(const RunConfig& cfg, const std::string& command_line) {
    validate(cfg);
    OutputWriter out(cfg.out_dir, cfg.format, command_line, cfg.source_text);
    if (cfg.mode == Mode::reproduce_figure) {
        reproduce_figure(cfg, out);
    } else {
        run_mode(cfg, out);
        if (cfg.plots) {
            std::vector<std::string> stems;
            for (const auto& f : out.files()) {
                const auto dot = f.rfind('.');
                const auto stem = f.substr(0, dot);
                if (std::find(stems.begin(), stems.end(), stem) == stems.end()) stems.push_back(stem);
            }
            out.write_text("plot.py", generic_plot_script(stems));
        }
        out.write_params(cfg.params, cfg.physical, run_json(cfg));
    }
    out.finish();
    return {out.dir(), out.files()};
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const std::invalid_argument*>(&e)) return 2;
    if (dynamic_cast<const NumericError*>(&e)) return 3;
    return 1;
}

} // namespace dicke::app
