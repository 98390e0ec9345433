// model.hpp: condensate-in-cavity geometry and its mapping onto the Dicke model
//
// Physical inputs are SI (rad/s, m, kg). Internally lengths are measured in
// pump wavelengths lambda_p = 2 pi / G and frequencies in the recoil frequency
// omega_R = hbar G^2 / 2m, which is what every output of this header uses.

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicke/quadrature.hpp"
#include "dicke/types.hpp"

namespace dicke {

inline constexpr double reduced_planck = 1.054571817e-34; // J s

template <typename Scalar>
struct PhysicalParams {
    Scalar pump_cavity_detuning{0};   // Delta_c [rad/s]
    Scalar dispersive_shift{0};       // U0 = g0^2 / Delta_a [rad/s]
    Scalar pump_coupling{0};          // eta = Omega_p g0 / Delta_a [rad/s]
    Scalar cavity_decay{0};           // kappa [rad/s]
    Scalar atom_number{1};
    Scalar condensate_length{0};      // D [m]
    Scalar cavity_length{0};          // L [m]
    Scalar trap_displacement{0};      // d [m], rigid shift of the whole trap
    Scalar cavity_wavevector{0};      // G [1/m]
    Scalar atom_mass{0};              // m [kg]
    Scalar max_displacement_fraction{0.1};

    // Provenance only; never used in the mapping.
    std::optional<Scalar> atom_cavity_coupling;   // g0
    std::optional<Scalar> pump_rabi_frequency;    // Omega_p
    std::optional<Scalar> atomic_detuning;        // Delta_a
};

using PhysicalParamsd = PhysicalParams<double>;

template <typename Scalar>
Scalar recoil_frequency(const PhysicalParams<Scalar>& p) {
    return Scalar(reduced_planck) * p.cavity_wavevector * p.cavity_wavevector / (Scalar(2) * p.atom_mass);
}

template <typename Scalar>
Scalar pump_wavelength(const PhysicalParams<Scalar>& p) {
    return Scalar(2) * std::numbers::pi_v<Scalar> / p.cavity_wavevector;
}

template <typename Scalar>
void validate(const PhysicalParams<Scalar>& p) {
    auto bad = [](const std::string& what) { throw std::invalid_argument("PhysicalParams: " + what); };
    if (!(p.atom_number >= 1)) bad("atom_number must be at least 1");
    if (!(p.condensate_length > 0)) bad("condensate_length must be positive");
    if (!(p.cavity_length >= p.condensate_length)) bad("cavity_length must be >= condensate_length");
    if (!(p.cavity_wavevector > 0)) bad("cavity_wavevector must be positive");
    if (!(p.atom_mass > 0)) bad("atom_mass must be positive");
    if (!(p.cavity_decay >= 0)) bad("cavity_decay must be non-negative");
    if (!(p.max_displacement_fraction > 0)) bad("max_displacement_fraction must be positive");
    if (!(std::abs(p.trap_displacement) < p.max_displacement_fraction * p.condensate_length)) {
        bad("|trap_displacement| must stay below max_displacement_fraction * condensate_length");
    }
    const Scalar half_gap = (p.cavity_length - p.condensate_length) / 2;
    if (std::abs(p.trap_displacement) > half_gap) bad("displaced trap leaves the cavity");
    // sin(Gx) is odd about the cavity centre only for a whole number of wavelengths.
    const Scalar wavelengths = p.cavity_length / pump_wavelength(p);
    if (std::abs(wavelengths - std::round(wavelengths)) > Scalar(1e-6) * std::max(Scalar(1), wavelengths)) {
        bad("cavity_length must be an integer number of wavelengths 2 pi / G");
    }
}

// Mode functions in units where lengths are measured in lambda_p.
template <typename Scalar>
struct ModeFunctions {
    Scalar x_left{0};
    Scalar x_right{0};
    Scalar cavity_length{0};
    Scalar wavevector{2 * std::numbers::pi_v<Scalar>};  // G in these units
    int excited_index{0};                              // n, with k_n = pi n / D
    Scalar excited_wavevector{0};

    Scalar length() const { return x_right - x_left; }
    bool contains(Scalar x) const { return x >= x_left && x <= x_right; }

    // Uniform condensate mode.
    Scalar phi0(Scalar x) const { return contains(x) ? Scalar(1) / std::sqrt(length()) : Scalar(0); }

    // Lowest-mismatch Neumann mode of the trap.
    Scalar phin(Scalar x) const {
        if (!contains(x)) return Scalar(0);
        return std::sqrt(Scalar(2) / length()) * std::cos(excited_wavevector * (x - x_left));
    }

    Scalar cavity(Scalar x) const { return std::sin(wavevector * x) / std::sqrt(cavity_length); }
};

template <typename Scalar>
ModeFunctions<Scalar> mode_functions(const PhysicalParams<Scalar>& p) {
    validate(p);
    const Scalar unit = pump_wavelength(p);
    const Scalar D = p.condensate_length / unit;
    const Scalar L = p.cavity_length / unit;
    const Scalar d = p.trap_displacement / unit;
    ModeFunctions<Scalar> m;
    m.cavity_length = L;
    m.x_left = (L - D) / 2 + d;
    m.x_right = (L + D) / 2 + d;
    const Scalar pi = std::numbers::pi_v<Scalar>;
    m.excited_index = std::max(1, static_cast<int>(std::lround(m.wavevector * D / pi)));
    m.excited_wavevector = pi * Scalar(m.excited_index) / D;
    return m;
}

template <typename Scalar>
struct OverlapIntegrals {
    Scalar cavity_norm;     // int |phi_c|^2 over the trap
    Scalar cavity_excited;  // int phi_c phi_n
    Scalar cavity_uniform;  // int phi_c phi_0
};

template <typename Scalar>
OverlapIntegrals<Scalar> overlap_integrals(const ModeFunctions<Scalar>& m, Scalar rel_tol = Scalar(1e-10)) {
    quad::QuadratureOptions<Scalar> opt;
    opt.rel_tol = rel_tol;
    // one Kronrod panel per half wavelength to start with
    opt.initial_segments = static_cast<std::size_t>(std::ceil(Scalar(2) * m.length())) + 1;
    // phi_c phi_0 integrates to zero for a centred trap; give it an absolute floor.
    opt.abs_tol = Scalar(1e-14) * std::sqrt(m.length() / m.cavity_length);

    const Scalar a = m.x_left, b = m.x_right;
    OverlapIntegrals<Scalar> out;
    out.cavity_norm = quad::integrate([&](Scalar x) { return m.cavity(x) * m.cavity(x); }, a, b, opt).value;
    out.cavity_excited = quad::integrate([&](Scalar x) { return m.cavity(x) * m.phin(x); }, a, b, opt).value;
    out.cavity_uniform = quad::integrate([&](Scalar x) { return m.cavity(x) / std::sqrt(b - a); }, a, b, opt).value;
    return out;
}

// Dicke parameters in recoil units (omega0 == 1).
//
// The sign of the phi_c phi_n overlap is gauged away (J -> -J), so lambda >= 0;
// density_profile undoes the same gauge when it rebuilds the condensate.
template <typename Scalar>
DickeParams<Scalar> map_to_dicke(const PhysicalParams<Scalar>& p) {
    const auto modes = mode_functions(p);
    const auto ov = overlap_integrals(modes);
    const Scalar wr = recoil_frequency(p);
    const Scalar D = modes.length();
    const Scalar N = p.atom_number;

    DickeParams<Scalar> out;
    out.omega0 = 1;
    out.omega = (-p.pump_cavity_detuning + (N * p.dispersive_shift / D) * ov.cavity_norm) / wr;
    if (!(out.omega > 0)) {
        throw std::invalid_argument("map_to_dicke: shifted cavity frequency is not positive "
                                    "(outside the dispersive regime)");
    }
    const Scalar drive = std::sqrt(N / D) * p.pump_coupling / wr;
    const Scalar gauge = ov.cavity_excited < 0 ? Scalar(-1) : Scalar(1);
    out.lambda = gauge * drive * ov.cavity_excited;
    out.lambda_prime = drive * ov.cavity_uniform;
    out.kappa = p.cavity_decay / wr;
    out.atom_number = N;
    return out;
}

// Condensate density |c0 phi0 + cn phin|^2 (atoms per lambda_p) on a grid given
// in units of lambda_p.
template <typename Scalar>
std::vector<Scalar> density_profile(const PhysicalParams<Scalar>& p, const MeanFieldState<Scalar>& s,
                                    const std::vector<Scalar>& grid, Scalar constraint_tol = Scalar(1e-6)) {
    const auto modes = mode_functions(p);
    const Scalar N = p.atom_number;
    const Scalar excess = std::abs(s.pseudo_spin_length2() - N * N / 4);
    if (excess > constraint_tol * N * N) {
        throw std::invalid_argument("density_profile: state violates |beta|^2 + w^2 = N^2/4");
    }
    for (Scalar x : grid) {
        if (!modes.contains(x)) throw std::invalid_argument("density_profile: grid point outside the trap");
    }
    const auto ov = overlap_integrals(modes, Scalar(1e-8));
    const Scalar gauge = ov.cavity_excited < 0 ? Scalar(-1) : Scalar(1);
    const Scalar sign = (s.beta.real() < 0 ? Scalar(-1) : Scalar(1)) * gauge;
    const Scalar c0 = std::sqrt(std::max(Scalar(0), N / 2 - s.w));
    const Scalar cn = sign * std::sqrt(std::max(Scalar(0), N / 2 + s.w));

    std::vector<Scalar> rho(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Scalar amp = c0 * modes.phi0(grid[i]) + cn * modes.phin(grid[i]);
        rho[i] = amp * amp;
    }
    return rho;
}

} // namespace dicke
