// tables.hpp: module results laid out as output tables

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

#include "dicke/dicke.hpp"

namespace dicke::app {

// Primary steady state at every grid point; continued point to point when lambda' != 0.
std::vector<MeanFieldStated> primary_branch(const DickeParamsd& p, const std::vector<double>& grid);

// ratio set: lambda' = ratio * lambda per row (proportional sweep).
Table steady_state_table(const std::string& name, const DickeParamsd& p, const SteadyStateBranch<double>& b,
                         std::optional<double> ratio = std::nullopt);

Table trajectory_table(const std::string& name, const DickeParamsd& p, const Trajectory<double>& tr);

enum class SpectrumParts { both, real, imag };
Table spectrum_table(const std::string& name, const DickeParamsd& p, const std::vector<double>& grid,
                     SpectrumParts parts = SpectrumParts::both);

Table photon_table(const std::string& name, const DickeParamsd& p, const std::vector<double>& grid);

Table g2_series_table(const std::string& name, const CorrelationSeries<double>& s);
Table g2_spectrum_table(const std::string& name, const G2Spectrum<double>& sp, double nu_max);
Table g2_peaks_table(const std::string& name, const G2Spectrum<double>& sp, const LinearizedModel<double>& lm,
                     std::size_t max_peaks = 8);

struct G2MapResult {
    Table series;     // (lambda, tau, g2) for tau <= tau_plot_max
    Table fft;        // (lambda, nu, log10 |F|) for nu <= nu_max
    Table peaks;      // dominant non-DC peak per lambda
    std::vector<std::string> warnings;
};
G2MapResult g2_map(const std::string& stem, const DickeParamsd& p, const std::vector<double>& grid,
                   const std::vector<double>& tau, double tau_plot_max, double nu_max, std::size_t workers);

Table driven_map_table(const std::string& name, const DickeParamsd& p, const DrivenMap<double>& m, double depth);
Table driven_ridge_table(const std::string& name, const DickeParamsd& p, const DrivenMap<double>& m);
Table driven_series_table(const std::string& name, const DrivenSeries<double>& s);

Table mapping_table(const std::string& name, const PhysicalParamsd& ph);

std::vector<double> linspace(double a, double b, std::size_t n);

} // namespace dicke::app
