// fluctuations.hpp: quadratic fluctuations about a steady state and their spectrum
//
// Fluctuations are h = (c, c+, d, d+), with c the cavity and d the Holstein-Primakoff
// boson. Frequencies follow h ~ exp(-i omega_k t), i.e. omega_k = i mu_k for the
// eigenvalues mu_k of the dynamical matrix M, so damping is -Im omega_k > 0.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dicke/errors.hpp"
#include "dicke/meanfield.hpp"
#include "dicke/types.hpp"

namespace dicke {

template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

template <typename Scalar>
struct HPCoefficients {
    Scalar omega0_prime{0};
    Scalar g1{0};
    Scalar g2{0};
    std::complex<Scalar> alpha_scaled{0};   // alpha_ss / sqrt(N)
    std::complex<Scalar> beta_scaled{0};    // beta_ss / N
    // Holstein-Primakoff displacement <b>/sqrt(N) = sign(Re beta) sqrt((N/2 + w)/N);
    // this is the quantity the coefficient formulas are evaluated at.
    Scalar displacement{0};
};

template <typename Scalar>
HPCoefficients<Scalar> hp_coefficients(const MeanFieldState<Scalar>& ss, const DickeParams<Scalar>& p) {
    validate(p);
    const Scalar N = p.atom_number;
    HPCoefficients<Scalar> c;
    c.alpha_scaled = ss.alpha / std::sqrt(N);
    c.beta_scaled = ss.beta / N;
    if (!(std::abs(c.beta_scaled) < Scalar(0.5))) {
        throw std::invalid_argument("hp_coefficients: |beta_ss/N| must be < 1/2 (Holstein-Primakoff validity)");
    }
    const Scalar fill = std::clamp((N / 2 + ss.w) / N, Scalar(0), Scalar(1));
    const Scalar b = (ss.beta.real() < 0 ? Scalar(-1) : Scalar(1)) * std::sqrt(fill);
    c.displacement = b;

    const Scalar ra = c.alpha_scaled.real();
    const Scalar one_b2 = Scalar(1) - b * b;
    const Scalar root = std::sqrt(one_b2);
    c.omega0_prime = p.omega0 - 2 * p.lambda * b / root * ra - 2 * p.lambda_prime * ra;
    c.g1 = -p.lambda * b * (Scalar(2) - b * b) / (Scalar(2) * one_b2 * root) * ra;
    c.g2 = p.lambda * (Scalar(1) - 2 * b * b) / root - p.lambda_prime * b;
    return c;
}

// Linear equations of motion dh/dt = M h including cavity damping on the c rows:
//   dc/dt = -(i omega + kappa) c - i g2 (d + d+)
//   dd/dt = -i omega0' d - 2 i g1 (d + d+) - i g2 (c + c+)
template <typename Scalar>
Matrix4c<Scalar> dynamical_matrix(const HPCoefficients<Scalar>& c, const DickeParams<Scalar>& p) {
    using C = std::complex<Scalar>;
    const C I(0, 1);
    const C w0 = c.omega0_prime, g1 = c.g1, g2 = c.g2;
    Matrix4c<Scalar> M;
    M << -(I * p.omega + p.kappa), C(0), -I * g2, -I * g2,
         C(0), I * p.omega - p.kappa, I * g2, I * g2,
         -I * g2, -I * g2, -I * w0 - Scalar(2) * I * g1, Scalar(-2) * I * g1,
         I * g2, I * g2, Scalar(2) * I * g1, I * w0 + Scalar(2) * I * g1;
    return M;
}

// Matrix about the given state; shorthand for dynamical_matrix(hp_coefficients(ss, p), p).
template <typename Scalar>
Matrix4c<Scalar> dynamical_matrix(const MeanFieldState<Scalar>& ss, const DickeParams<Scalar>& p) {
    return dynamical_matrix(hp_coefficients(ss, p), p);
}

template <typename Scalar>
struct ExcitationSpectrum {
    std::array<std::complex<Scalar>, 4> frequencies{};   // omega_k = i mu_k, sorted by (|Re|, Im)
    std::size_t polariton{0};                            // index of omega_ex in frequencies
    Matrix4c<Scalar> eigenvectors = Matrix4c<Scalar>::Zero();   // column k belongs to frequencies[k]
    bool has_eigenvectors{false};

    std::complex<Scalar> polariton_frequency() const { return frequencies[polariton]; }
    // max Re mu_k = max Im omega_k
    Scalar max_growth_rate() const {
        Scalar g = frequencies[0].imag();
        for (const auto& f : frequencies) g = std::max(g, f.imag());
        return g;
    }
};

namespace detail {

// Fraction of the eigenvector's weight in the atomic (d, d+) components.
template <typename Scalar>
Scalar atomic_weight(const Eigen::Matrix<std::complex<Scalar>, 4, 1>& v) {
    const Scalar total = v.squaredNorm();
    return total > 0 ? (std::norm(v[2]) + std::norm(v[3])) / total : Scalar(0);
}

// Among the two members of the polariton pair {omega, -omega*}: the one with Re > 0;
// when the pair is overdamped (both Re ~ 0), the soft member (smaller damping).
template <typename Scalar>
std::size_t pick_polariton(const std::array<std::complex<Scalar>, 4>& f, std::size_t i, std::size_t j) {
    const Scalar scale = std::max({std::abs(f[i]), std::abs(f[j]), Scalar(1)});
    const Scalar tol = Scalar(1e-12) * scale;
    if (std::abs(f[i].real()) <= tol && std::abs(f[j].real()) <= tol) {
        return std::abs(f[i].imag()) <= std::abs(f[j].imag()) ? i : j;
    }
    return f[i].real() >= f[j].real() ? i : j;
}

} // namespace detail

// Exact eigenfrequencies of M. The polariton pair is the pair with the larger atomic
// weight; spectrum_sweep refines that choice by eigenvector continuity.
template <typename Scalar>
ExcitationSpectrum<Scalar> spectrum(const Matrix4c<Scalar>& M, bool keep_eigenvectors = true) {
    using C = std::complex<Scalar>;
    Eigen::ComplexEigenSolver<Matrix4c<Scalar>> es(M, true);
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "spectrum: eigensolver failed for M =\n" << M;
        throw NumericError(os.str());
    }
    std::array<C, 4> freq{};
    for (int k = 0; k < 4; ++k) freq[static_cast<std::size_t>(k)] = C(0, 1) * es.eigenvalues()[k];

    std::array<std::size_t, 4> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Scalar ra = std::abs(freq[a].real()), rb = std::abs(freq[b].real());
        if (ra != rb) return ra < rb;
        if (freq[a].imag() != freq[b].imag()) return freq[a].imag() < freq[b].imag();
        return freq[a].real() < freq[b].real();
    });

    ExcitationSpectrum<Scalar> out;
    for (std::size_t k = 0; k < 4; ++k) {
        out.frequencies[k] = freq[order[k]];
        Eigen::Matrix<C, 4, 1> v = es.eigenvectors().col(static_cast<Eigen::Index>(order[k]));
        out.eigenvectors.col(static_cast<Eigen::Index>(k)) = v.normalized();
    }
    std::array<std::size_t, 4> by_weight{0, 1, 2, 3};
    std::stable_sort(by_weight.begin(), by_weight.end(), [&](std::size_t a, std::size_t b) {
        return detail::atomic_weight<Scalar>(out.eigenvectors.col(static_cast<Eigen::Index>(a)))
             > detail::atomic_weight<Scalar>(out.eigenvectors.col(static_cast<Eigen::Index>(b)));
    });
    out.polariton = detail::pick_polariton(out.frequencies, by_weight[0], by_weight[1]);
    out.has_eigenvectors = keep_eigenvectors;
    if (!keep_eigenvectors) out.eigenvectors.setZero();
    return out;
}

// Spectra along a lambda grid about the given steady states (one per grid point).
// Eigen-solves are independent; the polariton pair is then labelled sequentially by
// maximal eigenvector overlap with the previous grid point, starting from the
// atomic-weight choice at the first point.
template <typename Scalar>
std::vector<ExcitationSpectrum<Scalar>> spectrum_sweep(const DickeParams<Scalar>& p, const std::vector<Scalar>& lambdas,
                                                       const std::vector<MeanFieldState<Scalar>>& states) {
    if (lambdas.size() != states.size()) throw std::invalid_argument("spectrum_sweep: grid/state size mismatch");
    std::vector<ExcitationSpectrum<Scalar>> out;
    out.reserve(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        out.push_back(spectrum(dynamical_matrix(states[i], p.with_lambda(lambdas[i]))));
    }
    for (std::size_t i = 1; i < out.size(); ++i) {
        const auto& prev = out[i - 1];
        auto& cur = out[i];
        // overlap of every current eigenvector with the previous polariton pair
        const auto vp = prev.eigenvectors.col(static_cast<Eigen::Index>(prev.polariton));
        std::array<Scalar, 4> ov{};
        for (std::size_t k = 0; k < 4; ++k) {
            ov[k] = std::abs(vp.dot(cur.eigenvectors.col(static_cast<Eigen::Index>(k))));
        }
        // the pair partner of the polariton shares its atomic character, so keep the two
        // best-overlapping vectors and apply the within-pair rule
        std::array<std::size_t, 4> idx{0, 1, 2, 3};
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            const Scalar wa = ov[a] + detail::atomic_weight<Scalar>(cur.eigenvectors.col(static_cast<Eigen::Index>(a)));
            const Scalar wb = ov[b] + detail::atomic_weight<Scalar>(cur.eigenvectors.col(static_cast<Eigen::Index>(b)));
            return wa > wb;
        });
        cur.polariton = detail::pick_polariton(cur.frequencies, idx[0], idx[1]);
    }
    return out;
}

namespace detail {

template <typename Scalar>
Scalar dispersive_parameter(const DickeParams<Scalar>& p) {
    return p.omega0 * p.omega0 / (p.omega * p.omega + p.kappa * p.kappa);
}

template <typename Scalar>
void require_dispersive(const DickeParams<Scalar>& p, const char* who) {
    if (!(dispersive_parameter(p) < Scalar(1e-2))) {
        throw std::invalid_argument(std::string(who) + ": requires omega0^2/(omega^2 + kappa^2) < 1e-2");
    }
}

} // namespace detail

template <typename Scalar>
struct OverdampedWindow {
    Scalar lower;   // lambda_1
    Scalar upper;   // lambda_2
};

// Perturbative edges of the window where the soft mode is purely damped.
template <typename Scalar>
OverdampedWindow<Scalar> overdamped_window(const DickeParams<Scalar>& p) {
    detail::require_dispersive(p, "overdamped_window");
    const Scalar lc = critical_coupling(p);
    const Scalar s = p.kappa * p.omega0 / (p.omega * p.omega + p.kappa * p.kappa);
    const Scalar e = s * s;
    return {lc * (Scalar(1) - e), lc * (Scalar(1) + e / 2)};
}

// Near-critical soft-mode eigenfrequency, -i (omega^2 + kappa^2)/(2 kappa) (1 - lambda^2/lambda_c^2).
template <typename Scalar>
std::complex<Scalar> overdamped_eigenvalue(const DickeParams<Scalar>& p, Scalar lambda) {
    detail::require_dispersive(p, "overdamped_eigenvalue");
    if (!(p.kappa > 0)) throw std::invalid_argument("overdamped_eigenvalue: requires kappa > 0");
    const Scalar lc = critical_coupling(p);
    const Scalar r = lambda / lc;
    return {Scalar(0), -(p.omega * p.omega + p.kappa * p.kappa) / (2 * p.kappa) * (Scalar(1) - r * r)};
}

// Leading-order polariton frequency below the overdamped window.
template <typename Scalar>
std::complex<Scalar> soft_mode_perturbative(const DickeParams<Scalar>& p, Scalar lambda) {
    detail::require_dispersive(p, "soft_mode_perturbative");
    if (!(lambda >= 0)) throw std::invalid_argument("soft_mode_perturbative: lambda must be non-negative");
    if (p.kappa > 0 && !(lambda < overdamped_window(p).lower)) {
        throw std::invalid_argument("soft_mode_perturbative: lambda must lie below the overdamped window");
    }
    const Scalar lc = critical_coupling(p);
    if (p.kappa == 0 && !(lambda < lc)) throw std::invalid_argument("soft_mode_perturbative: requires lambda < lambda_c");
    const Scalar eps = detail::dispersive_parameter(p);
    const Scalar r2 = (lambda / lc) * (lambda / lc);
    const Scalar re = p.omega0 * std::sqrt(Scalar(1) - r2) * (Scalar(1) + eps * r2 / 2);
    const Scalar im = -p.kappa * eps * r2;
    return {re, im};
}

} // namespace dicke
