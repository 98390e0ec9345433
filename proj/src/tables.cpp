#include "tables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dicke::app {

namespace {

Cell opt_cell(const std::optional<double>& v) {
    if (v) return *v;
    return std::monostate{};
}

// Leading-order polariton frequency where the expansion applies, else nothing.
std::optional<std::complex<double>> perturbative(const DickeParamsd& p, double lambda) {
    try {
        return soft_mode_perturbative(p, lambda);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

std::optional<double> boundary(const DickeParamsd& p, double lambda) {
    try {
        return instability_boundary(p, lambda);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

} // namespace

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    if (n > 1) v.back() = b;
    return v;
}

std::vector<MeanFieldStated> primary_branch(const DickeParamsd& p, const std::vector<double>& grid) {
    std::vector<MeanFieldStated> out;
    out.reserve(grid.size());
    if (grid.empty()) return out;
    if (p.lambda_prime == 0) {
        for (double l : grid) out.push_back(primary_steady_state(p.with_lambda(l)));
        return out;
    }
    out.push_back(primary_steady_state(p.with_lambda(grid.front())));
    for (std::size_t i = 1; i < grid.size(); ++i) {
        out.push_back(detail::continue_to(p, out.back(), grid[i - 1], grid[i]));
    }
    return out;
}

Table steady_state_table(const std::string& name, const DickeParamsd& p, const SteadyStateBranch<double>& b,
                         std::optional<double> ratio) {
    Table t;
    t.name = name;
    t.description = "steady states with linear stability; alpha, beta and w in raw units (N atoms)";
    t.columns = {"lambda [omega0]", "lambda_prime [omega0]", "label", "Re alpha [1]", "Im alpha [1]",
                 "Re beta [1]",     "Im beta [1]",           "w [1]", "stability",   "growth rate [omega0]",
                 "residual [1]"};
    for (std::size_t i = 0; i < b.lambdas.size(); ++i) {
        const double lp = ratio ? *ratio * b.lambdas[i] : p.lambda_prime;
        const auto q = p.with_lambda(b.lambdas[i]).with_lambda_prime(lp);
        for (const auto& pt : b.points[i]) {
            const auto& s = pt.state;
            t.add({b.lambdas[i], lp, pt.label, s.alpha.real(), s.alpha.imag(), s.beta.real(), s.beta.imag(), s.w,
                   std::string(to_string(pt.stability)), pt.growth_rate, fixed_point_residual(s, q)});
        }
    }
    return t;
}

Table trajectory_table(const std::string& name, const DickeParamsd& p, const Trajectory<double>& tr) {
    Table t;
    t.name = name;
    t.description = "mean-field trajectory; constraint drift is (|beta|^2 + w^2 - N^2/4)/N^2";
    t.columns = {"t [1/omega0]", "Re alpha [1]", "Im alpha [1]", "Re beta [1]", "Im beta [1]", "w [1]",
                 "constraint drift [1]"};
    const double N = p.atom_number;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const auto& s = tr.states[i];
        t.add({tr.times[i], s.alpha.real(), s.alpha.imag(), s.beta.real(), s.beta.imag(), s.w,
               (s.pseudo_spin_length2() - N * N / 4) / (N * N)});
    }
    return t;
}

Table spectrum_table(const std::string& name, const DickeParamsd& p, const std::vector<double>& grid,
                     SpectrumParts parts) {
    const auto states = primary_branch(p, grid);
    const auto specs = spectrum_sweep(p, grid, states);
    const double lc = critical_coupling(p);
    const bool re = parts != SpectrumParts::imag, im = parts != SpectrumParts::real;

    Table t;
    t.name = name;
    t.description = "fluctuation eigenfrequencies about the primary steady state; columns 1-4 sorted by |Re|";
    t.columns = {"lambda [omega0]", "lambda/lambda_c [1]"};
    if (re) t.columns.push_back("Re omega_ex [omega0]");
    if (im) t.columns.push_back("Im omega_ex [omega0]");
    for (int k = 1; k <= 4; ++k) {
        if (re) t.columns.push_back("Re omega_" + std::to_string(k) + " [omega0]");
        if (im) t.columns.push_back("Im omega_" + std::to_string(k) + " [omega0]");
    }
    if (re) t.columns.push_back("Re omega_ex leading order [omega0]");
    if (im) t.columns.push_back("Im omega_ex leading order [omega0]");

    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<Cell> row{grid[i], grid[i] / lc};
        const auto ex = specs[i].polariton_frequency();
        if (re) row.emplace_back(ex.real());
        if (im) row.emplace_back(ex.imag());
        for (const auto& f : specs[i].frequencies) {
            if (re) row.emplace_back(f.real());
            if (im) row.emplace_back(f.imag());
        }
        const auto pt = perturbative(p, grid[i]);
        if (re) row.push_back(pt ? Cell(pt->real()) : Cell(std::monostate{}));
        if (im) row.push_back(pt ? Cell(pt->imag()) : Cell(std::monostate{}));
        t.add(std::move(row));
    }
    return t;
}

Table photon_table(const std::string& name, const DickeParamsd& p, const std::vector<double>& grid) {
    const double lc = critical_coupling(p);
    Table t;
    t.name = name;
    t.description = "intracavity photon number and output flux; closed-system ground state where defined";
    t.columns = {"lambda [omega0]",           "lambda/lambda_c [1]",        "fluctuation photons [1]",
                 "coherent photons [1]",      "photon number [1]",          "photon flux [omega0]",
                 "ground-state photons [1]"};
    for (double l : grid) {
        const auto q = p.with_lambda(l);
        const auto lm = linearize(q);
        const double nf = lm.fluctuation_photons();
        const double nc = std::norm(lm.alpha());
        std::optional<double> gs;
        if (p.lambda_prime == 0 && p.omega0 / p.omega < 0.1 && l < closed_critical_coupling(p)) {
            gs = ground_state_photon_number(p, l);
        }
        t.add({l, l / lc, nf, nc, nf + nc, 2 * p.kappa * (nf + nc), opt_cell(gs)});
    }
    return t;
}

Table g2_series_table(const std::string& name, const CorrelationSeries<double>& s) {
    Table t;
    t.name = name;
    t.description = "steady-state photon correlations versus delay";
    t.columns = {"tau [1/omega0]", "g2 [1]", "Re g1 [1]", "Im g1 [1]", "Re <c+(tau)c> [1]", "Im <c+(tau)c> [1]",
                 "Re <c(tau)c> [1]", "Im <c(tau)c> [1]"};
    for (std::size_t i = 0; i < s.tau.size(); ++i) {
        t.add({s.tau[i], s.g2[i], s.g1[i].real(), s.g1[i].imag(), s.cdag_c[i].real(), s.cdag_c[i].imag(),
               s.c_c[i].real(), s.c_c[i].imag()});
    }
    return t;
}

Table g2_spectrum_table(const std::string& name, const G2Spectrum<double>& sp, double nu_max) {
    Table t;
    t.name = name;
    t.description = "log10 magnitude of the DFT of g2(tau) minus its long-time mean";
    t.columns = {"nu [omega0]", "log10 |F| [1]"};
    for (std::size_t k = 0; k < sp.nu.size() && sp.nu[k] <= nu_max; ++k) t.add({sp.nu[k], sp.log_magnitude[k]});
    return t;
}

Table g2_peaks_table(const std::string& name, const G2Spectrum<double>& sp, const LinearizedModel<double>& lm,
                     std::size_t max_peaks) {
    const auto ex = spectrum(lm.M, false).polariton_frequency();
    const auto peaks = find_peaks(sp, false);
    Table t;
    t.name = name;
    t.description = "strongest non-DC spectral peaks of g2 against twice the polariton frequency";
    t.columns = {"rank", "nu [omega0]", "log10 |F| [1]", "half width [omega0]", "bin width [omega0]",
                 "2 Re omega_ex [omega0]"};
    for (std::size_t r = 0; r < std::min(max_peaks, peaks.size()); ++r) {
        t.add({static_cast<long long>(r + 1), peaks[r].nu, peaks[r].log_magnitude, peaks[r].half_width, sp.bin_width,
               2 * ex.real()});
    }
    return t;
}

G2MapResult g2_map(const std::string& stem, const DickeParamsd& p, const std::vector<double>& grid,
                   const std::vector<double>& tau, double tau_plot_max, double nu_max, std::size_t workers) {
    const double lc = critical_coupling(p);
    struct Cellout {
        CorrelationSeries<double> s;
        G2Spectrum<double> sp;
        std::complex<double> ex;
    };
    std::vector<Cellout> cells(grid.size());
    const auto states = primary_branch(p, grid);
    parallel_for(grid.size(), workers, [&](std::size_t i) {
        const auto lm = linearize(p.with_lambda(grid[i]), states[i]);
        cells[i].s = g2(lm, tau);
        cells[i].sp = g2_spectrum(cells[i].s);
        cells[i].ex = spectrum(lm.M, false).polariton_frequency();
    });

    G2MapResult r;
    r.series.name = stem + "_series";
    r.series.description = "g2(tau) over the coupling grid";
    r.series.columns = {"lambda [omega0]", "tau [1/omega0]", "g2 [1]"};
    r.fft.name = stem + "_fft";
    r.fft.description = "log10 |DFT| of g2(tau) minus its long-time mean over the coupling grid";
    r.fft.columns = {"lambda [omega0]", "nu [omega0]", "log10 |F| [1]"};
    r.peaks.name = stem + "_peaks";
    r.peaks.description = "dominant non-DC peak of the g2 spectrum per coupling";
    r.peaks.columns = {"lambda [omega0]", "lambda/lambda_c [1]", "nu peak [omega0]", "bin width [omega0]",
                       "2 Re omega_ex [omega0]", "2 omega0 sqrt(1 - lambda^2/lambda_c^2) [omega0]"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& c = cells[i];
        for (std::size_t k = 0; k < c.s.tau.size() && c.s.tau[k] <= tau_plot_max; ++k) {
            r.series.add({grid[i], c.s.tau[k], c.s.g2[k]});
        }
        for (std::size_t k = 0; k < c.sp.nu.size() && c.sp.nu[k] <= nu_max; ++k) {
            r.fft.add({grid[i], c.sp.nu[k], c.sp.log_magnitude[k]});
        }
        Cell peak = std::monostate{};
        try {
            peak = dominant_peak(c.sp).nu;
        } catch (const NumericError& e) {
            r.warnings.push_back("lambda = " + format_double(grid[i]) + ": " + e.what());
        }
        r.peaks.add({grid[i], grid[i] / lc, peak, c.sp.bin_width, 2 * c.ex.real(), opt_cell(boundary(p, grid[i]))});
        for (const auto& w : c.s.warnings) r.warnings.push_back("lambda = " + format_double(grid[i]) + ": " + w);
    }
    return r;
}

Table driven_map_table(const std::string& name, const DickeParamsd& p, const DrivenMap<double>& m, double depth) {
    const double lc = critical_coupling(p);
    Table t;
    t.name = name;
    t.description = "maximum response after the transient under modulated coupling; Floquet exponent of the "
                    "linearized atomic mode";
    t.columns = {"lambda [omega0]", "lambda/lambda_c [1]", "nu [omega0]", "max |alpha|^2/N [1]",
                 "max Re beta/N [1]", "stabilized", "Floquet Re mu [omega0]", "alpha2 cap [1]"};
    for (std::size_t i = 0; i < m.lambdas.size(); ++i) {
        for (std::size_t j = 0; j < m.nus.size(); ++j) {
            const auto& c = m.at(i, j);
            Cell mu = std::monostate{};
            if (m.lambdas[i] < lc) {
                mu = mathieu_floquet(ModulationConfig<double>{m.lambdas[i], depth, m.nus[j]}, p).mu.real() * p.omega0;
            }
            t.add({c.lambda, c.lambda / lc, c.nu, c.max_alpha2, c.max_rebeta,
                   static_cast<long long>(c.stabilized ? 1 : 0), mu, m.alpha2_cap});
        }
    }
    return t;
}

Table driven_ridge_table(const std::string& name, const DickeParamsd& p, const DrivenMap<double>& m) {
    const double lc = critical_coupling(p);
    Table t;
    t.name = name;
    t.description = "modulation frequency of maximum photon response per coupling";
    t.columns = {"lambda [omega0]", "lambda/lambda_c [1]", "nu at max [omega0]", "max |alpha|^2/N [1]",
                 "2 Re omega_ex [omega0]", "resonance boundary [omega0]"};
    for (std::size_t i = 0; i < m.lambdas.size(); ++i) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < m.nus.size(); ++j) {
            if (m.at(i, j).max_alpha2 > m.at(i, best).max_alpha2) best = j;
        }
        const double l = m.lambdas[i];
        const auto q = p.with_lambda(l);
        const double ex = spectrum(dynamical_matrix(primary_steady_state(q), q), false).polariton_frequency().real();
        t.add({l, l / lc, m.nus[best], m.at(i, best).max_alpha2, 2 * ex, opt_cell(boundary(p, l))});
    }
    return t;
}

Table driven_series_table(const std::string& name, const DrivenSeries<double>& s) {
    Table t;
    t.name = name;
    t.description = "driven mean-field time series";
    t.columns = {"t [1/omega0]", "|alpha|^2/N [1]", "Re beta/N [1]"};
    for (std::size_t i = 0; i < s.t.size(); ++i) t.add({s.t[i], s.alpha2[i], s.rebeta[i]});
    return t;
}

Table mapping_table(const std::string& name, const PhysicalParamsd& ph) {
    const auto modes = mode_functions(ph);
    const auto ov = overlap_integrals(modes);
    const auto d = map_to_dicke(ph);
    Table t;
    t.name = name;
    t.description = "physical parameters mapped onto the Dicke model (recoil units)";
    t.columns = {"quantity", "value", "unit"};
    t.add({std::string("recoil frequency"), recoil_frequency(ph), std::string("rad/s")});
    t.add({std::string("pump wavelength"), pump_wavelength(ph), std::string("m")});
    t.add({std::string("trap left edge"), modes.x_left, std::string("lambda_p")});
    t.add({std::string("trap right edge"), modes.x_right, std::string("lambda_p")});
    t.add({std::string("excited mode index"), static_cast<long long>(modes.excited_index), std::string("1")});
    t.add({std::string("overlap cavity-cavity"), ov.cavity_norm, std::string("1")});
    t.add({std::string("overlap cavity-excited"), ov.cavity_excited, std::string("1")});
    t.add({std::string("overlap cavity-uniform"), ov.cavity_uniform, std::string("1")});
    t.add({std::string("omega"), d.omega, std::string("omega0")});
    t.add({std::string("kappa"), d.kappa, std::string("omega0")});
    t.add({std::string("lambda"), d.lambda, std::string("omega0")});
    t.add({std::string("lambda_prime"), d.lambda_prime, std::string("omega0")});
    t.add({std::string("lambda_prime/lambda"), d.lambda == 0 ? std::nan("") : d.lambda_prime / d.lambda,
           std::string("1")});
    t.add({std::string("lambda_c"), critical_coupling(d), std::string("omega0")});
    t.add({std::string("atom number"), d.atom_number, std::string("1")});
    return t;
}

} // namespace dicke::app
