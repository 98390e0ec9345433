#include "figures.hpp"

#include <algorithm>
#include <cmath>

#include "plots.hpp"
#include "tables.hpp"

namespace dicke::app {

namespace {

DickeParamsd base_params() {
    DickeParamsd p;
    p.omega = 300;
    p.omega0 = 1;
    p.kappa = 200;
    p.atom_number = 1e6;
    return p;
}

std::vector<double> doubles(const Json& j) { return j.get<std::vector<double>>(); }

Table select(const Table& src, const std::string& name, const std::string& description,
             const std::vector<std::size_t>& cols) {
    Table t;
    t.name = name;
    t.description = description;
    for (auto c : cols) t.columns.push_back(src.columns[c]);
    for (const auto& row : src.rows) {
        std::vector<Cell> r;
        for (auto c : cols) r.push_back(row[c]);
        t.add(std::move(r));
    }
    return t;
}

std::vector<FigureSpec> build_table() {
    std::vector<FigureSpec> t;
    {
        FigureSpec f;
        f.id = "fig1";
        f.description = "polariton eigenfrequencies versus coupling (real and imaginary parts), full range and "
                        "magnified around the critical coupling";
        f.params = base_params();
        f.settings = {{"lambda_over_critical_max", 1.5},
                      {"wide_points", 601},
                      {"zoom_in_window_units", {-4.0, 3.0}},
                      {"zoom_points", 401}};
        t.push_back(f);
    }
    {
        FigureSpec f;
        f.id = "fig2";
        f.description = "g2(tau) over a coupling sweep below threshold, its Fourier spectrum, and the long-delay "
                        "decay at one coupling";
        f.params = base_params();
        f.settings = {{"lambda_start", 0.5},  {"lambda_stop", 10.0}, {"lambda_step", 0.5}, {"tau_step", 0.125},
                      {"tau_samples", 32768}, {"tau_plot_max", 60.0}, {"nu_max", 3.0},    {"long_time_lambda", 8.0}};
        t.push_back(f);
    }
    {
        FigureSpec f;
        f.id = "fig3";
        f.description = "g2(tau) with a symmetry-breaking field and without it, at several couplings";
        f.params = base_params();
        f.settings = {{"lambdas", {2.0, 6.0, 8.0, 9.0, 10.0}},
                      {"lambda_prime_over_lambda", 1.0 / 360.0},
                      {"tau_max", 40.0},
                      {"tau_samples", 4001}};
        t.push_back(f);
    }
    {
        FigureSpec f;
        f.id = "fig4";
        f.description = "maximum driven response versus coupling and modulation frequency, and one driven time "
                        "series at resonance";
        f.params = base_params();
        f.settings = {{"depth", 1.0 / 50.0},
                      {"lambda_over_critical_step", 0.0475},
                      {"lambda_points", 20},
                      {"nu_min", 0.1},
                      {"nu_max", 2.0},
                      {"nu_points", 20},
                      {"series_lambda_over_critical", 0.8},
                      {"series_nu", 1.2},
                      {"series_t_max", 2000.0},
                      {"series_samples", 4001}};
        t.push_back(f);
    }
    {
        FigureSpec f;
        f.id = "fig5";
        f.description = "steady-state branches without and with a symmetry-breaking field (trap displaced either "
                        "way), and condensate density profiles for both field signs";
        f.params = base_params();
        f.settings = {{"lambda_over_critical_max", 1.5},
                      {"lambda_points", 301},
                      {"density_lambda", 9.0},
                      {"density_points", 2001}};
        f.needs_physical = true;
        t.push_back(f);
    }
    return t;
}

void fig1(const FigureSpec& f, OutputWriter& out) {
    const auto& p = f.params;
    const double lc = critical_coupling(p);
    const auto wide = linspace(0, f.settings["lambda_over_critical_max"].get<double>() * lc,
                               f.settings["wide_points"].get<std::size_t>());
    const auto w = overdamped_window(p);
    const double e = (w.upper - w.lower) / (1.5 * lc);   // window width in units of lambda_c e
    const auto z = doubles(f.settings["zoom_in_window_units"]);
    const auto zoom = linspace(lc * (1 + z[0] * e), lc * (1 + z[1] * e), f.settings["zoom_points"].get<std::size_t>());

    out.write(spectrum_table("fig1a_real", p, wide, SpectrumParts::real));
    out.write(spectrum_table("fig1b_imag", p, wide, SpectrumParts::imag));
    auto zr = spectrum_table("fig1c_real_zoom", p, zoom, SpectrumParts::real);
    auto zi = spectrum_table("fig1d_imag_zoom", p, zoom, SpectrumParts::imag);
    zr.description += "; overdamped window estimate [" + format_double(w.lower) + ", " + format_double(w.upper) + "]";
    zi.description = zr.description;
    out.write(zr);
    out.write(zi);
}

void fig2(const FigureSpec& f, OutputWriter& out, std::size_t workers) {
    const auto& s = f.settings;
    const auto& p = f.params;
    std::vector<double> grid;
    for (double l = s["lambda_start"].get<double>(); l <= s["lambda_stop"].get<double>() + 1e-12;
         l += s["lambda_step"].get<double>()) {
        grid.push_back(l);
    }
    const auto n = s["tau_samples"].get<std::size_t>();
    const double dt = s["tau_step"].get<double>();
    const auto tau = linspace(0, dt * static_cast<double>(n - 1), n);
    auto r = g2_map("fig2", p, grid, tau, s["tau_plot_max"].get<double>(), s["nu_max"].get<double>(), workers);
    r.series.name = "fig2a_g2_map";
    r.fft.name = "fig2b_fft_map";
    r.peaks.name = "fig2b_peaks";
    out.write(r.series);
    out.write(r.fft);
    out.write(r.peaks);
    for (const auto& w : r.warnings) out.add_warning(w);

    const auto q = p.with_lambda(s["long_time_lambda"].get<double>());
    const auto lm = linearize(q);
    const auto g = default_tau_grid(lm);
    for (const auto& w : g.warnings) out.add_warning(w);
    auto series = g2(lm, g.tau);
    for (const auto& w : series.warnings) out.add_warning(w);
    out.write(g2_series_table("fig2c_long_time", series));
}

void fig3(const FigureSpec& f, OutputWriter& out, std::size_t workers) {
    const auto& s = f.settings;
    const auto lambdas = doubles(s["lambdas"]);
    const double ratio = s["lambda_prime_over_lambda"].get<double>();
    const auto tau = linspace(0, s["tau_max"].get<double>(), s["tau_samples"].get<std::size_t>());
    std::vector<CorrelationSeries<double>> with(lambdas.size()), without(lambdas.size());
    parallel_for(lambdas.size(), workers, [&](std::size_t i) {
        const auto q = f.params.with_lambda(lambdas[i]);
        with[i] = g2(linearize(q.with_lambda_prime(ratio * lambdas[i])), tau);
        without[i] = g2(linearize(q.with_lambda_prime(0)), tau);
    });
    Table t;
    t.name = "fig3_g2";
    t.description = "g2(tau) with lambda' = ratio * lambda and with lambda' = 0";
    t.columns = {"lambda [omega0]", "lambda_prime [omega0]", "tau [1/omega0]", "g2 with field [1]",
                 "g2 without field [1]"};
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        for (std::size_t k = 0; k < tau.size(); ++k) {
            t.add({lambdas[i], ratio * lambdas[i], tau[k], with[i].g2[k], without[i].g2[k]});
        }
    }
    out.write(t);
}

void fig4(const FigureSpec& f, const RunConfig& cfg, OutputWriter& out) {
    const auto& s = f.settings;
    const auto& p = f.params;
    const double lc = critical_coupling(p);
    const double depth = s["depth"].get<double>();
    std::vector<double> lambdas;
    for (std::size_t k = 0; k < s["lambda_points"].get<std::size_t>(); ++k) {
        lambdas.push_back(lc * s["lambda_over_critical_step"].get<double>() * static_cast<double>(k + 1));
    }
    const auto nus = linspace(s["nu_min"].get<double>(), s["nu_max"].get<double>(), s["nu_points"].get<std::size_t>());
    const auto m = driven_response_map(p, lambdas, nus, depth, cfg.driven, cfg.workers);
    const auto full = driven_map_table("fig4_map", p, m, depth);
    out.write(select(full, "fig4a_alpha2_map", "maximum |alpha|^2/N after the transient", {0, 1, 2, 3, 5, 7}));
    out.write(select(full, "fig4b_rebeta_map", "maximum Re beta/N after the transient", {0, 1, 2, 4, 5}));
    out.write(driven_ridge_table("fig4_ridge", p, m));

    Table b;
    b.name = "fig4_boundary";
    b.description = "principal parametric resonance curve";
    b.columns = {"lambda/lambda_c [1]", "nu [omega0]"};
    for (double r : linspace(0, 0.999, 200)) b.add({r, instability_boundary(p, r * lc)});
    out.write(b);

    const auto times = linspace(0, s["series_t_max"].get<double>(), s["series_samples"].get<std::size_t>());
    const auto series = driven_time_series(p, s["series_lambda_over_critical"].get<double>() * lc, depth,
                                           s["series_nu"].get<double>(), times, cfg.driven);
    out.write(driven_series_table("fig4c_series", series));
}

void fig5(const FigureSpec& f, const RunConfig& cfg, OutputWriter& out) {
    if (!cfg.physical) {
        throw ConfigError("reproduce-figure fig5: a physical block is required for the symmetry-breaking panels");
    }
    const auto& s = f.settings;
    // The configured trap and its mirror image; panel (c) takes the one with sgn(lambda') = sgn(lambda).
    PhysicalParamsd same = *cfg.physical;
    PhysicalParamsd opposite = same;
    opposite.trap_displacement = -same.trap_displacement;
    if (map_to_dicke(same).lambda_prime < 0) std::swap(same, opposite);
    const auto ps = map_to_dicke(same);
    const auto po = map_to_dicke(opposite);
    if (ps.lambda == 0) throw ConfigError("reproduce-figure fig5: mapped coupling is zero");
    const double ratio_s = ps.lambda_prime / ps.lambda;
    const double ratio_o = po.lambda_prime / po.lambda;
    const auto& p = ps;
    const double lc = critical_coupling(p);
    const auto grid = linspace(0, s["lambda_over_critical_max"].get<double>() * lc,
                               s["lambda_points"].get<std::size_t>());

    out.write(steady_state_table("fig5a_branches_zero_field", p.with_lambda_prime(0),
                                 steady_states(p.with_lambda_prime(0), grid)));
    out.write(steady_state_table("fig5c_branches_same_sign", p, steady_states_proportional(p, grid, ratio_s),
                                 ratio_s));
    out.write(steady_state_table("fig5d_branches_opposite_sign", p, steady_states_proportional(p, grid, ratio_o),
                                 ratio_o));

    const double lambda_b = s["density_lambda"].get<double>();
    const double lp = pump_wavelength(same);
    Table d;
    d.name = "fig5b_density";
    d.description = "condensate density for the two trap displacements (opposite signs of lambda')";
    d.columns = {"trap displacement [lambda_p]", "lambda_prime [omega0]", "x [lambda_p]",
                 "x - trap left edge [lambda_p]", "density [atoms/lambda_p]"};
    for (const auto& [ph, ratio] : {std::pair{same, ratio_s}, std::pair{opposite, ratio_o}}) {
        const auto q = p.with_lambda(lambda_b).with_lambda_prime(ratio * lambda_b);
        const auto state = primary_steady_state(q);
        const auto modes = mode_functions(ph);
        const auto x = linspace(modes.x_left, modes.x_right, s["density_points"].get<std::size_t>());
        const auto rho = density_profile(ph, state, x);
        for (std::size_t i = 0; i < x.size(); ++i) {
            d.add({ph.trap_displacement / lp, q.lambda_prime, x[i], x[i] - modes.x_left, rho[i]});
        }
    }
    out.write(d);
    out.write(mapping_table("fig5_mapping", *cfg.physical));
}

} // namespace

const std::vector<FigureSpec>& figure_table() {
    static const std::vector<FigureSpec> table = build_table();
    return table;
}

const FigureSpec& figure_spec(const std::string& id) {
    for (const auto& f : figure_table()) {
        if (f.id == id) return f;
    }
    throw ConfigError("unknown figure '" + id + "' (expected fig1..fig5)");
}

void reproduce_figure(const RunConfig& cfg, OutputWriter& out) {
    FigureSpec f = figure_spec(cfg.figure);
    if (f.needs_physical && cfg.physical) f.params = map_to_dicke(*cfg.physical);

    Json run;
    run["mode"] = to_string(cfg.mode);
    run["figure"] = f.id;
    run["revision"] = f.revision;
    run["description"] = f.description;
    run["settings"] = f.settings;
    if (f.id == "fig1") fig1(f, out);
    else if (f.id == "fig2") fig2(f, out, cfg.workers);
    else if (f.id == "fig3") fig3(f, out, cfg.workers);
    else if (f.id == "fig4") fig4(f, cfg, out);
    else fig5(f, cfg, out);
    out.write_params(f.params, cfg.physical, run);
    if (cfg.plots) out.write_text("plot_" + f.id + ".py", figure_plot_script(f.id));
}

} // namespace dicke::app
