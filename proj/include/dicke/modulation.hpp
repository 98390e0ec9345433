// modulation.hpp: parametric driving of the coupling, lambda(t) = lambda (1 + eps cos nu t)
//
// Amplitudes here are per-atom scaled: a = alpha/sqrt(N), b = beta/N, w/N in [-1/2, 1/2],
// so N drops out of every equation.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicke/errors.hpp"
#include "dicke/meanfield.hpp"
#include "dicke/ode.hpp"
#include "dicke/parallel.hpp"
#include "dicke/types.hpp"

namespace dicke {

template <typename Scalar>
struct ModulationConfig {
    Scalar lambda{0};      // base coupling
    Scalar depth{0.02};    // eps
    Scalar nu{1};          // modulation frequency

    // A = 1 - (lambda/lambda_c)^2 and eps~ = (lambda/lambda_c)^2 eps for scaled time omega0 t.
    Scalar mathieu_a(const DickeParams<Scalar>& p) const {
        const Scalar r = lambda / critical_coupling(p);
        return Scalar(1) - r * r;
    }
    Scalar mathieu_eps(const DickeParams<Scalar>& p) const {
        const Scalar r = lambda / critical_coupling(p);
        return r * r * depth;
    }
};

template <typename Scalar>
void validate(const ModulationConfig<Scalar>& c) {
    if (!(c.depth > 0 && c.depth < Scalar(0.2))) throw std::invalid_argument("ModulationConfig: need 0 < eps < 0.2");
    if (!(c.nu > 0)) throw std::invalid_argument("ModulationConfig: nu must be positive");
    if (!(c.lambda >= 0)) throw std::invalid_argument("ModulationConfig: lambda must be non-negative");
}

// Cavity adiabatically eliminated, b = beta/N:
//   db/dt = -i omega0 b + 4 i lambda_t^2 omega/(omega^2 + kappa^2) sqrt(1/4 - |b|^2) (b + b*)
template <typename Scalar>
std::complex<Scalar> adiabatic_beta_rhs(std::complex<Scalar> b, Scalar lambda_t, const DickeParams<Scalar>& p) {
    using C = std::complex<Scalar>;
    if (!(p.kappa / p.omega0 > 10)) throw std::invalid_argument("adiabatic_beta_rhs: requires kappa/omega0 > 10");
    const Scalar b2 = std::norm(b);
    if (b2 > Scalar(0.25)) throw NumericError("adiabatic_beta_rhs: |b| > 1/2, state left the Bloch sphere");
    const Scalar g = 4 * lambda_t * lambda_t * p.omega / (p.omega * p.omega + p.kappa * p.kappa);
    return C(0, -p.omega0) * b + C(0, g * std::sqrt(Scalar(0.25) - b2) * 2 * b.real());
}

template <typename Scalar>
struct FloquetResult {
    std::complex<Scalar> mu;                 // per unit scaled time
    Eigen::Matrix<Scalar, 2, 2> monodromy;
    Scalar trace{0};
    Scalar determinant{0};
    bool unstable{false};                    // |trace|/2 > 1
};

// Floquet exponent of u'' + [A - 2 eps cos(nu_hat t)] u = 0 from the monodromy matrix over
// one period 2 pi / nu_hat.
template <typename Scalar>
FloquetResult<Scalar> mathieu_floquet(Scalar A, Scalar eps, Scalar nu_hat, Scalar rtol = Scalar(1e-12)) {
    if (!(nu_hat > 0)) throw std::invalid_argument("mathieu_floquet: nu must be positive");
    using V4 = Eigen::Matrix<Scalar, 4, 1>;
    const Scalar T = 2 * std::numbers::pi_v<Scalar> / nu_hat;
    auto f = [&](Scalar t, const V4& y) {
        const Scalar q = A - 2 * eps * std::cos(nu_hat * t);
        V4 d;
        d << y[1], -q * y[0], y[3], -q * y[2];
        return d;
    };
    ode::Options<V4> opt;
    opt.rtol = rtol;
    opt.atol = V4::Constant(rtol * Scalar(1e-2));
    V4 y;
    y << 1, 0, 0, 1;
    ode::integrate(f, y, Scalar(0), T, opt);

    FloquetResult<Scalar> r;
    r.monodromy << y[0], y[2], y[1], y[3];
    r.trace = r.monodromy.trace();
    r.determinant = r.monodromy.determinant();
    if (std::abs(r.determinant - 1) > Scalar(1e-8)) {
        throw NumericError("mathieu_floquet: monodromy determinant " + std::to_string(r.determinant) + " != 1");
    }
    const Scalar h = r.trace / 2;
    const Scalar scale = nu_hat / (2 * std::numbers::pi_v<Scalar>);
    if (std::abs(h) <= 1) {
        r.mu = {Scalar(0), std::acos(h) * scale};
    } else {
        r.mu = {std::acosh(std::abs(h)) * scale, h < 0 ? std::numbers::pi_v<Scalar> * scale : Scalar(0)};
        r.unstable = true;
    }
    return r;
}

template <typename Scalar>
FloquetResult<Scalar> mathieu_floquet(const ModulationConfig<Scalar>& cfg, const DickeParams<Scalar>& p) {
    validate(cfg);
    return mathieu_floquet(cfg.mathieu_a(p), cfg.mathieu_eps(p), cfg.nu / p.omega0);
}

// Principal parametric resonance nu = 2 omega0 sqrt(1 - (lambda/lambda_c)^2).
template <typename Scalar>
Scalar instability_boundary(const DickeParams<Scalar>& p, Scalar lambda) {
    const Scalar r = lambda / critical_coupling(p);
    if (!(lambda >= 0 && r < 1)) throw std::invalid_argument("instability_boundary: requires 0 <= lambda < lambda_c");
    return 2 * p.omega0 * std::sqrt(Scalar(1) - r * r);
}

namespace detail {

// Scaled full equations with w eliminated (negative root); y = (Re a, Im a, Re b, Im b).
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 1> driven_rhs(const Eigen::Matrix<Scalar, 4, 1>& y, const DickeParams<Scalar>& p,
                                       Scalar lambda_t) {
    using C = std::complex<Scalar>;
    const C a(y[0], y[1]), b(y[2], y[3]);
    const Scalar w = -std::sqrt(std::max(Scalar(0), Scalar(0.25) - std::norm(b)));
    const Scalar x = 2 * a.real();
    const C I(0, 1);
    const C da = -C(p.kappa, p.omega) * a - I * (lambda_t * 2 * b.real()) - I * (p.lambda_prime * (Scalar(0.5) - w));
    const C db = -I * p.omega0 * b + I * (2 * lambda_t * x * w) + I * (p.lambda_prime * x) * b;
    Eigen::Matrix<Scalar, 4, 1> out;
    out << da.real(), da.imag(), db.real(), db.imag();
    return out;
}

} // namespace detail

template <typename Scalar>
struct DrivenOptions {
    Scalar t_max{2000};                       // in 1/omega0
    Scalar transient_fraction{0.5};           // discarded head of the run
    std::complex<Scalar> seed_alpha{1e-4, 0}; // a(0)
    std::complex<Scalar> seed_beta{1e-4, 0};  // b(0)
    Scalar rtol{1e-8};
    Scalar stationarity_tolerance{0.05};      // last-quarter max <= (1 + tol) * preceding-quarter max
};

template <typename Scalar>
struct DrivenCell {
    Scalar lambda{0};
    Scalar nu{0};
    Scalar max_alpha2{0};     // max |alpha|^2/N after the transient
    Scalar max_rebeta{0};     // max Re(beta)/N after the transient
    bool stabilized{true};
};

template <typename Scalar>
struct DrivenSeries {
    std::vector<Scalar> t;
    std::vector<Scalar> alpha2;   // |alpha|^2/N
    std::vector<Scalar> rebeta;   // Re(beta)/N
};

namespace detail {

// Integrates one cell; on_step(t, y) sees every accepted step.
template <typename Scalar, typename Observer>
void run_driven(const DickeParams<Scalar>& p, Scalar lambda, Scalar depth, Scalar nu, const DrivenOptions<Scalar>& o,
                Observer&& on_step) {
    using V4 = Eigen::Matrix<Scalar, 4, 1>;
    auto f = [&](Scalar t, const V4& y) {
        return driven_rhs(y, p, lambda * (Scalar(1) + depth * std::cos(nu * t)));
    };
    ode::Options<V4> opt;
    opt.rtol = o.rtol;
    opt.atol = V4::Constant(o.rtol * Scalar(1e-6));
    V4 y;
    y << o.seed_alpha.real(), o.seed_alpha.imag(), o.seed_beta.real(), o.seed_beta.imag();
    on_step(Scalar(0), y);
    ode::integrate(f, y, Scalar(0), o.t_max, opt,
                   [&](const ode::DenseStep<V4>& s) { on_step(s.t_new, *s.y_new); });
}

} // namespace detail

template <typename Scalar>
DrivenCell<Scalar> driven_response(const DickeParams<Scalar>& p, Scalar lambda, Scalar depth, Scalar nu,
                                   const DrivenOptions<Scalar>& o = {}) {
    validate(p);
    validate(ModulationConfig<Scalar>{lambda, depth, nu});
    if (!(o.t_max > 0)) throw std::invalid_argument("driven_response: t_max must be positive");
    const Scalar t_cut = o.t_max * o.transient_fraction;
    const Scalar t_q3 = o.t_max * Scalar(0.75);
    DrivenCell<Scalar> c;
    c.lambda = lambda;
    c.nu = nu;
    c.max_alpha2 = 0;
    c.max_rebeta = -std::numeric_limits<Scalar>::infinity();
    Scalar q3 = 0, q4 = 0;
    detail::run_driven(p, lambda, depth, nu, o, [&](Scalar t, const Eigen::Matrix<Scalar, 4, 1>& y) {
        if (t < t_cut) return;
        const Scalar a2 = y[0] * y[0] + y[1] * y[1];
        c.max_alpha2 = std::max(c.max_alpha2, a2);
        c.max_rebeta = std::max(c.max_rebeta, y[2]);
        if (t < t_q3) q3 = std::max(q3, a2);
        else q4 = std::max(q4, a2);
    });
    c.stabilized = q4 <= (Scalar(1) + o.stationarity_tolerance) * q3;
    return c;
}

template <typename Scalar>
DrivenSeries<Scalar> driven_time_series(const DickeParams<Scalar>& p, Scalar lambda, Scalar depth, Scalar nu,
                                        const std::vector<Scalar>& times, const DrivenOptions<Scalar>& o = {}) {
    validate(p);
    validate(ModulationConfig<Scalar>{lambda, depth, nu});
    using V4 = Eigen::Matrix<Scalar, 4, 1>;
    auto f = [&](Scalar t, const V4& y) {
        return detail::driven_rhs(y, p, lambda * (Scalar(1) + depth * std::cos(nu * t)));
    };
    ode::Options<V4> opt;
    opt.rtol = o.rtol;
    opt.atol = V4::Constant(o.rtol * Scalar(1e-6));
    V4 y0;
    y0 << o.seed_alpha.real(), o.seed_alpha.imag(), o.seed_beta.real(), o.seed_beta.imag();
    DrivenSeries<Scalar> s;
    if (times.empty()) return s;
    const auto ys = ode::sample(f, y0, Scalar(0), times, opt);
    s.t = times;
    for (const auto& y : ys) {
        s.alpha2.push_back(y[0] * y[0] + y[1] * y[1]);
        s.rebeta.push_back(y[2]);
    }
    return s;
}

template <typename Scalar>
struct DrivenMap {
    std::vector<Scalar> lambdas;
    std::vector<Scalar> nus;
    std::vector<DrivenCell<Scalar>> cells;   // row-major: cells[i * nus.size() + j]
    // Colour-scale cap: the largest |alpha|^2/N any state on the sphere can sustain,
    // lambda_max^2 (1 + eps)^2 / (omega^2 + kappa^2).
    Scalar alpha2_cap{0};

    const DrivenCell<Scalar>& at(std::size_t i, std::size_t j) const { return cells[i * nus.size() + j]; }
};

template <typename Scalar>
DrivenMap<Scalar> driven_response_map(const DickeParams<Scalar>& p, const std::vector<Scalar>& lambdas,
                                      const std::vector<Scalar>& nus, Scalar depth,
                                      const DrivenOptions<Scalar>& o = {}, std::size_t workers = 1) {
    if (lambdas.empty() || nus.empty()) throw std::invalid_argument("driven_response_map: empty grid");
    DrivenMap<Scalar> m;
    m.lambdas = lambdas;
    m.nus = nus;
    m.cells.resize(lambdas.size() * nus.size());
    parallel_for(m.cells.size(), workers, [&](std::size_t k) {
        m.cells[k] = driven_response(p, lambdas[k / nus.size()], depth, nus[k % nus.size()], o);
    });
    const Scalar lmax = *std::max_element(lambdas.begin(), lambdas.end()) * (Scalar(1) + depth);
    m.alpha2_cap = lmax * lmax / (p.omega * p.omega + p.kappa * p.kappa);
    return m;
}

} // namespace dicke
