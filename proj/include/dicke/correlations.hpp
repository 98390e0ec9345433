// correlations.hpp: photodetection observables of the linearized open system
//
// Fluctuations h = (c, c+, d, d+) obey dh = M h dt + noise, with vacuum input on the
// cavity: the only non-zero noise correlation is <c_in(t) c_in+(t')> = delta(t - t'),
// which enters the c c+ ordering with weight 2 kappa.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicke/errors.hpp"
#include "dicke/fluctuations.hpp"
#include "dicke/meanfield.hpp"
#include "dicke/steady_states.hpp"
#include "dicke/types.hpp"

namespace dicke {

// The ten independent equal-time second moments of the fluctuations.
template <typename Scalar>
struct MomentVector {
    using Complex = std::complex<Scalar>;
    enum Index { cc, cdag_cdag, cdag_c, dd, ddag_ddag, ddag_d, cd, cdag_ddag, cdag_d, c_ddag };
    static constexpr std::array<const char*, 10> names{"<cc>",   "<c+c+>", "<c+c>",  "<dd>",   "<d+d+>",
                                                        "<d+d>",  "<cd>",   "<c+d+>", "<c+d>",  "<cd+>"};
    std::array<Complex, 10> m{};

    Complex operator[](std::size_t i) const { return m[i]; }
    Complex& operator[](std::size_t i) { return m[i]; }

    // C_ij = <h_i h_j>; mixed c,d pairs commute, [c, c+] = [d, d+] = 1.
    Eigen::Matrix<Complex, 4, 4> covariance() const {
        Eigen::Matrix<Complex, 4, 4> C;
        C(0, 0) = m[cc];        C(0, 1) = m[cdag_c] + Scalar(1);
        C(1, 0) = m[cdag_c];    C(1, 1) = m[cdag_cdag];
        C(2, 2) = m[dd];        C(2, 3) = m[ddag_d] + Scalar(1);
        C(3, 2) = m[ddag_d];    C(3, 3) = m[ddag_ddag];
        C(0, 2) = C(2, 0) = m[cd];
        C(1, 3) = C(3, 1) = m[cdag_ddag];
        C(1, 2) = C(2, 1) = m[cdag_d];
        C(0, 3) = C(3, 0) = m[c_ddag];
        return C;
    }

    // Largest violation of the conjugate-pair relations and of the reality of the
    // two number moments.
    Scalar conjugate_closure_residual() const {
        Scalar r = 0;
        r = std::max(r, std::abs(m[cdag_cdag] - std::conj(m[cc])));
        r = std::max(r, std::abs(m[ddag_ddag] - std::conj(m[dd])));
        r = std::max(r, std::abs(m[cdag_ddag] - std::conj(m[cd])));
        r = std::max(r, std::abs(m[c_ddag] - std::conj(m[cdag_d])));
        r = std::max(r, std::abs(m[cdag_c].imag()));
        r = std::max(r, std::abs(m[ddag_d].imag()));
        return r;
    }
};

namespace detail {

// Entries (i, j) of M C + C M^T + D used as the ten moment equations.
inline constexpr std::array<std::array<int, 2>, 10> moment_rows{
    {{0, 0}, {1, 1}, {1, 0}, {2, 2}, {3, 3}, {3, 2}, {0, 2}, {1, 3}, {1, 2}, {0, 3}}};

template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 4, 4> noise_matrix(Scalar kappa) {
    Eigen::Matrix<std::complex<Scalar>, 4, 4> D = Eigen::Matrix<std::complex<Scalar>, 4, 4>::Zero();
    D(0, 1) = 2 * kappa;
    return D;
}

} // namespace detail

// The 10x10 linear system A m = b of the stationary moment equations for a given M.
template <typename Scalar>
void moment_system(const Matrix4c<Scalar>& M, Scalar kappa, Eigen::Matrix<std::complex<Scalar>, 10, 10>& A,
                   Eigen::Matrix<std::complex<Scalar>, 10, 1>& b) {
    using C = std::complex<Scalar>;
    const auto D = detail::noise_matrix(kappa);
    auto equations = [&](const MomentVector<Scalar>& mv) {
        const Eigen::Matrix<C, 4, 4> Cm = mv.covariance();
        const Eigen::Matrix<C, 4, 4> E = M * Cm + Cm * M.transpose() + D;
        Eigen::Matrix<C, 10, 1> e;
        for (std::size_t r = 0; r < 10; ++r) e[static_cast<Eigen::Index>(r)] = E(detail::moment_rows[r][0], detail::moment_rows[r][1]);
        return e;
    };
    const Eigen::Matrix<C, 10, 1> e0 = equations(MomentVector<Scalar>{});
    for (std::size_t k = 0; k < 10; ++k) {
        MomentVector<Scalar> unit;
        unit.m[k] = C(1);
        A.col(static_cast<Eigen::Index>(k)) = equations(unit) - e0;
    }
    b = -e0;
}

template <typename Scalar>
MomentVector<Scalar> steady_moments(const Matrix4c<Scalar>& M, Scalar kappa) {
    using C = std::complex<Scalar>;
    Eigen::ComplexEigenSolver<Matrix4c<Scalar>> es(M, false);
    Scalar growth = -std::numeric_limits<Scalar>::infinity();
    for (int k = 0; k < 4; ++k) growth = std::max(growth, es.eigenvalues()[k].real());
    if (!(growth < 0)) throw NumericError("steady_moments: fluctuation matrix has no stable steady state");

    Eigen::Matrix<C, 10, 10> A;
    Eigen::Matrix<C, 10, 1> b;
    moment_system(M, kappa, A, b);
    const Eigen::Matrix<C, 10, 1> x = A.fullPivLu().solve(b);
    if (!x.allFinite()) throw NumericError("steady_moments: singular moment system");
    MomentVector<Scalar> out;
    for (std::size_t k = 0; k < 10; ++k) out.m[k] = x[static_cast<Eigen::Index>(k)];
    return out;
}

namespace detail {

template <typename Scalar>
void guard_threshold(const DickeParams<Scalar>& p) {
    const Scalar r = p.lambda / critical_coupling(p);
    if (std::abs(Scalar(1) - r) < Scalar(1e-6)) {
        throw ThresholdError("too close to the critical coupling (|1 - lambda/lambda_c| < 1e-6)",
                             static_cast<double>(r));
    }
}

} // namespace detail

// Everything the correlation functions need about one parameter point.
template <typename Scalar>
struct LinearizedModel {
    DickeParams<Scalar> params;
    MeanFieldState<Scalar> steady_state;
    HPCoefficients<Scalar> coefficients;
    Matrix4c<Scalar> M;
    MomentVector<Scalar> moments;

    // fluctuation photon number <c+c>
    Scalar fluctuation_photons() const { return moments[MomentVector<Scalar>::cdag_c].real(); }
    // coherent amplitude, a = alpha_ss + c
    std::complex<Scalar> alpha() const { return steady_state.alpha; }
};

template <typename Scalar>
LinearizedModel<Scalar> linearize(const DickeParams<Scalar>& p, const MeanFieldState<Scalar>& ss) {
    validate(p);
    detail::guard_threshold(p);
    LinearizedModel<Scalar> lm;
    lm.params = p;
    lm.steady_state = ss;
    lm.coefficients = hp_coefficients(ss, p);
    lm.M = dynamical_matrix(lm.coefficients, p);
    lm.moments = steady_moments(lm.M, p.kappa);
    return lm;
}

// Linearizes about primary_steady_state(p).
template <typename Scalar>
LinearizedModel<Scalar> linearize(const DickeParams<Scalar>& p) {
    validate(p);
    detail::guard_threshold(p);
    return linearize(p, primary_steady_state(p));
}

template <typename Scalar>
MomentVector<Scalar> steady_moments(const DickeParams<Scalar>& p) {
    return linearize(p).moments;
}

// Intracavity photon number <c+c> + |alpha_ss|^2.
template <typename Scalar>
Scalar photon_number(const DickeParams<Scalar>& p) {
    const auto lm = linearize(p);
    return lm.fluctuation_photons() + std::norm(lm.alpha());
}

// Output photon flux 2 kappa (<c+c> + |alpha_ss|^2).
template <typename Scalar>
Scalar photon_flux(const DickeParams<Scalar>& p) {
    return 2 * p.kappa * photon_number(p);
}

// Ground-state photon number of the closed model, lambda^2 / (omega^2 sqrt(1 - (lambda/lambda_cc)^2)),
// lambda_cc = (1/2) sqrt(omega omega0).
template <typename Scalar>
Scalar ground_state_photon_number(const DickeParams<Scalar>& p, Scalar lambda) {
    if (!(p.omega0 / p.omega < Scalar(0.1))) {
        throw std::invalid_argument("ground_state_photon_number: requires omega0/omega < 0.1");
    }
    const Scalar lcc = closed_critical_coupling(p);
    if (!(lambda < lcc)) {
        throw ThresholdError("ground_state_photon_number: at or above the closed-system threshold",
                             static_cast<double>(lambda / lcc));
    }
    const Scalar r = lambda / lcc;
    return lambda * lambda / (p.omega * p.omega * std::sqrt(Scalar(1) - r * r));
}

enum class CorrelationMethod { frequency_domain, regression };

template <typename Scalar>
struct CorrelationSeries {
    using Complex = std::complex<Scalar>;
    std::vector<Scalar> tau;
    std::vector<Complex> cdag_c;   // <c+(t+tau) c(t)>
    std::vector<Complex> c_c;      // <c(t+tau) c(t)>
    std::vector<Complex> g1;
    std::vector<Scalar> g2;
    Scalar g2_imag_residue{0};     // largest |Im| met while evaluating g2
    Complex alpha_ss{0};
    Scalar photon_number{0};       // <c+c> + |alpha_ss|^2
    std::vector<std::string> warnings;
};

namespace detail {

template <typename Scalar>
Scalar uniform_step(const std::vector<Scalar>& tau) {
    if (tau.size() < 2) return Scalar(0);
    const Scalar dt = (tau.back() - tau.front()) / Scalar(tau.size() - 1);
    if (!(dt > 0)) throw std::invalid_argument("tau grid must be increasing");
    for (std::size_t i = 0; i < tau.size(); ++i) {
        const Scalar expect = tau.front() + dt * Scalar(i);
        if (std::abs(tau[i] - expect) > Scalar(1e-9) * std::max(std::abs(tau.back()), dt)) {
            throw std::invalid_argument("tau grid must be uniform");
        }
    }
    return dt;
}

template <typename Scalar>
void nyquist_check(const LinearizedModel<Scalar>& lm, Scalar dt, std::vector<std::string>& warnings) {
    if (!(dt > 0)) return;
    const Scalar re = std::abs(spectrum(lm.M, false).polariton_frequency().real());
    // g2 oscillates at twice the polariton frequency
    if (re > 0 && dt > std::numbers::pi_v<Scalar> / (2 * re)) {
        warnings.push_back("tau grid too coarse: step " + std::to_string(dt) + " exceeds the Nyquist limit " +
                           std::to_string(std::numbers::pi_v<Scalar> / (2 * re)) + " for 2 Re(omega_ex)");
    }
}

} // namespace detail

// <h_i(tau) h_0(0)> for i = 0 (c) and i = 1 (c+) on the grid, tau >= 0.
//
// frequency_domain: the Fourier-space Langevin solution h(nu) = (-i nu - M)^{-1} n(nu)
// integrated over nu by residues, X(tau) = 2 kappa sum_k e^{mu_k tau} V_k (V^-1)_k0 [(-M - mu_k)^{-1}]_{.1}.
// regression: X(tau) = e^{M tau} C from the stationary moments, advanced with a fixed
// one-step propagator.
template <typename Scalar>
CorrelationSeries<Scalar> two_time_correlations(const LinearizedModel<Scalar>& lm, const std::vector<Scalar>& tau,
                                                CorrelationMethod method) {
    using C = std::complex<Scalar>;
    using M4 = Matrix4c<Scalar>;
    for (Scalar t : tau) {
        if (!(t >= 0)) throw std::invalid_argument("two_time_correlations: tau must be non-negative");
    }
    CorrelationSeries<Scalar> out;
    out.tau = tau;
    out.alpha_ss = lm.alpha();
    out.photon_number = lm.fluctuation_photons() + std::norm(lm.alpha());
    out.cdag_c.resize(tau.size());
    out.c_c.resize(tau.size());
    const Scalar dt = detail::uniform_step(tau);
    detail::nyquist_check(lm, dt, out.warnings);
    if (tau.empty()) return out;

    if (method == CorrelationMethod::frequency_domain) {
        Eigen::ComplexEigenSolver<M4> es(lm.M, true);
        if (es.info() != Eigen::Success) throw NumericError("two_time_correlations: eigensolver failed");
        const M4 V = es.eigenvectors();
        const M4 Vinv = V.inverse();
        std::array<C, 4> mu{};
        std::array<Eigen::Matrix<C, 4, 1>, 4> left{};
        std::array<C, 4> right{};   // [(-M - mu_k)^{-1}]_{01}
        for (int k = 0; k < 4; ++k) {
            mu[static_cast<std::size_t>(k)] = es.eigenvalues()[k];
            left[static_cast<std::size_t>(k)] = V.col(k) * Vinv(k, 0) * (2 * lm.params.kappa);
            const M4 R = (-lm.M - es.eigenvalues()[k] * M4::Identity()).inverse();
            right[static_cast<std::size_t>(k)] = R(0, 1);
        }
        for (std::size_t n = 0; n < tau.size(); ++n) {
            C x0(0), x1(0);
            for (std::size_t k = 0; k < 4; ++k) {
                const C e = std::exp(mu[k] * tau[n]) * right[k];
                x0 += left[k][0] * e;
                x1 += left[k][1] * e;
            }
            out.c_c[n] = x0;
            out.cdag_c[n] = x1;
        }
    } else {
        const M4 C0 = lm.moments.covariance();
        Eigen::Matrix<C, 4, 4> X = (lm.M * tau.front()).exp() * C0;
        const M4 step = dt > 0 ? M4((lm.M * dt).exp()) : M4::Identity();
        for (std::size_t n = 0; n < tau.size(); ++n) {
            if (n > 0) X = step * X;
            out.c_c[n] = X(0, 0);
            out.cdag_c[n] = X(1, 0);
        }
    }
    return out;
}

// Fills g1 and g2 from the two-time moments already in the series:
//   g1 = (<c+(tau) c> + |alpha|^2) / (<c+c> + |alpha|^2)
//   g2 = 1 + |g1|^2 + (|<c(tau) c> + alpha^2|^2 - 2 |alpha|^4) / (<c+c> + |alpha|^2)^2
template <typename Scalar>
void fill_g2(CorrelationSeries<Scalar>& s, std::complex<Scalar> fluctuation_photons) {
    using C = std::complex<Scalar>;
    const C a = s.alpha_ss;
    const Scalar a2 = std::norm(a);
    const C n = fluctuation_photons + a2;
    if (!(std::abs(n) >= Scalar(1e-30))) throw NumericError("g2: total photon number below 1e-30");
    s.g1.resize(s.tau.size());
    s.g2.resize(s.tau.size());
    s.g2_imag_residue = 0;
    for (std::size_t i = 0; i < s.tau.size(); ++i) {
        s.g1[i] = (s.cdag_c[i] + a2) / n;
        const C z = s.c_c[i] + a * a;
        const C g2 = Scalar(1) + s.g1[i] * std::conj(s.g1[i]) + (z * std::conj(z) - 2 * a2 * a2) / (n * n);
        s.g2[i] = g2.real();
        s.g2_imag_residue = std::max(s.g2_imag_residue, std::abs(g2.imag()));
    }
}

template <typename Scalar>
CorrelationSeries<Scalar> g2(const LinearizedModel<Scalar>& lm, const std::vector<Scalar>& tau,
                             CorrelationMethod method = CorrelationMethod::regression) {
    auto s = two_time_correlations(lm, tau, method);
    fill_g2(s, lm.moments[MomentVector<Scalar>::cdag_c]);
    return s;
}

// g2 with alpha_ss supplied by the caller (zero for lambda' = 0).
template <typename Scalar>
CorrelationSeries<Scalar> g2(const DickeParams<Scalar>& p, const std::vector<Scalar>& tau,
                             const MeanFieldState<Scalar>& ss,
                             CorrelationMethod method = CorrelationMethod::regression) {
    return g2(linearize(p, ss), tau, method);
}

template <typename Scalar>
struct TauGrid {
    std::vector<Scalar> tau;
    Scalar step{0};
    std::vector<std::string> warnings;
};

// Uniform grid from 0 spanning span_factor envelope times 1/|Im omega_ex|, with a
// power-of-two sample count of at least min_samples, doubled until the step resolves
// 2 Re(omega_ex) with a factor-2 margin (capped at max_samples).
template <typename Scalar>
TauGrid<Scalar> default_tau_grid(const LinearizedModel<Scalar>& lm, Scalar span_factor = Scalar(20),
                                 std::size_t min_samples = std::size_t(1) << 14,
                                 std::size_t max_samples = std::size_t(1) << 20) {
    const auto ex = spectrum(lm.M, false).polariton_frequency();
    const Scalar damping = std::abs(ex.imag());
    if (!(damping > 0)) throw NumericError("default_tau_grid: polariton is undamped");
    const Scalar span = span_factor / damping;
    const Scalar re = std::abs(ex.real());
    const Scalar dt_max = re > 0 ? std::numbers::pi_v<Scalar> / (4 * re) : std::numeric_limits<Scalar>::infinity();
    std::size_t n = std::max<std::size_t>(2, min_samples);
    while (span / Scalar(n - 1) > dt_max && n < max_samples) n *= 2;

    TauGrid<Scalar> g;
    g.step = span / Scalar(n - 1);
    if (g.step > dt_max) {
        g.warnings.push_back("default_tau_grid: sample cap reached before the Nyquist margin was met");
    }
    g.tau.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.tau[i] = g.step * Scalar(i);
    return g;
}

template <typename Scalar>
struct SpectralPeak {
    Scalar nu{0};             // angular frequency, refined
    Scalar log_magnitude{0};  // log10 |F|, refined
    std::size_t bin{0};
    Scalar half_width{0};     // half width at half maximum of |F|, 0 if not bracketed
};

template <typename Scalar>
struct G2Spectrum {
    std::vector<Scalar> nu;             // angular frequencies 2 pi k / (n dt), k = 0..n/2
    std::vector<Scalar> log_magnitude;  // log10 |DFT|
    Scalar bin_width{0};
    Scalar subtracted_mean{0};
};

// DFT of g2(tau) minus its long-time mean (the mean over the last quarter of the series),
// zero-padded to a power of two.
template <typename Scalar>
G2Spectrum<Scalar> g2_spectrum(const CorrelationSeries<Scalar>& s, bool subtract_mean = true) {
    using C = std::complex<Scalar>;
    const std::size_t len = s.g2.size();
    if (len < 2) throw std::invalid_argument("g2_spectrum: need at least two samples");
    const Scalar dt = detail::uniform_step(s.tau);
    std::size_t n = 1;
    while (n < len) n <<= 1;

    G2Spectrum<Scalar> out;
    if (subtract_mean) {
        const std::size_t from = len - std::max<std::size_t>(1, len / 4);
        Scalar acc = 0;
        for (std::size_t i = from; i < len; ++i) acc += s.g2[i];
        out.subtracted_mean = acc / Scalar(len - from);
    }
    std::vector<Scalar> x(n, Scalar(0));
    for (std::size_t i = 0; i < len; ++i) x[i] = s.g2[i] - out.subtracted_mean;

    Eigen::FFT<Scalar> fft;
    std::vector<C> F;
    fft.fwd(F, x);
    const std::size_t half = n / 2;
    out.bin_width = 2 * std::numbers::pi_v<Scalar> / (Scalar(n) * dt);
    out.nu.resize(half + 1);
    out.log_magnitude.resize(half + 1);
    const Scalar floor = std::numeric_limits<Scalar>::min();
    for (std::size_t k = 0; k <= half; ++k) {
        out.nu[k] = out.bin_width * Scalar(k);
        out.log_magnitude[k] = std::log10(std::max(std::abs(F[k]), floor));
    }
    return out;
}

// Local maxima of the magnitude, strongest first, with parabolic refinement on the
// log magnitude and a linearly interpolated half width.
template <typename Scalar>
std::vector<SpectralPeak<Scalar>> find_peaks(const G2Spectrum<Scalar>& sp, bool include_dc = true) {
    std::vector<SpectralPeak<Scalar>> peaks;
    const auto& y = sp.log_magnitude;
    const std::size_t n = y.size();
    auto mag = [&](std::size_t k) { return std::pow(Scalar(10), y[k]); };
    for (std::size_t k = 0; k < n; ++k) {
        if (k == 0 && !include_dc) continue;
        const bool left_ok = k == 0 || y[k] > y[k - 1];
        const bool right_ok = k + 1 == n || (k == 0 ? y[k] > y[k + 1] : y[k] >= y[k + 1]);
        if (!(left_ok && right_ok)) continue;
        SpectralPeak<Scalar> p;
        p.bin = k;
        p.nu = sp.nu[k];
        p.log_magnitude = y[k];
        if (k > 0 && k + 1 < n) {
            const Scalar a = y[k - 1], b = y[k], c = y[k + 1];
            const Scalar den = a - 2 * b + c;
            if (den < 0) {
                const Scalar shift = Scalar(0.5) * (a - c) / den;
                p.nu = sp.nu[k] + shift * sp.bin_width;
                p.log_magnitude = b - Scalar(0.25) * (a - c) * shift;
            }
        }
        // half maximum of |F|
        const Scalar target = mag(k) / 2;
        Scalar lo = -1, hi = -1;
        for (std::size_t j = k; j-- > 0;) {
            if (mag(j) <= target) {
                const Scalar f = (target - mag(j)) / (mag(j + 1) - mag(j));
                lo = sp.nu[j] + f * sp.bin_width;
                break;
            }
        }
        for (std::size_t j = k + 1; j < n; ++j) {
            if (mag(j) <= target) {
                const Scalar f = (mag(j - 1) - target) / (mag(j - 1) - mag(j));
                hi = sp.nu[j - 1] + f * sp.bin_width;
                break;
            }
        }
        if (lo >= 0 && hi >= 0) p.half_width = (hi - lo) / 2;
        peaks.push_back(p);
    }
    std::stable_sort(peaks.begin(), peaks.end(),
                     [](const auto& a, const auto& b) { return a.log_magnitude > b.log_magnitude; });
    return peaks;
}

// Strongest peak away from nu = 0.
template <typename Scalar>
SpectralPeak<Scalar> dominant_peak(const G2Spectrum<Scalar>& sp) {
    const auto peaks = find_peaks(sp, false);
    if (peaks.empty()) throw NumericError("dominant_peak: no local maximum away from nu = 0");
    return peaks.front();
}

} // namespace dicke
