// meanfield.hpp: semiclassical equations of motion, trajectories and fixed points

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicke/errors.hpp"
#include "dicke/ode.hpp"
#include "dicke/types.hpp"

namespace dicke {

// Open-system critical coupling, (1/2) sqrt((omega0/omega)(kappa^2 + omega^2)).
template <typename Scalar>
Scalar critical_coupling(const DickeParams<Scalar>& p) {
    if (!(p.omega > 0) || !(p.omega0 > 0)) throw std::invalid_argument("critical_coupling: omega, omega0 must be positive");
    return Scalar(0.5) * std::sqrt(p.omega0 / p.omega * (p.kappa * p.kappa + p.omega * p.omega));
}

// Threshold of the closed (kappa = 0) system, (1/2) sqrt(omega omega0).
template <typename Scalar>
Scalar closed_critical_coupling(const DickeParams<Scalar>& p) {
    return Scalar(0.5) * std::sqrt(p.omega * p.omega0);
}

namespace detail {

// Right-hand side on the packed (Re a, Im a, Re b, Im b, w) vector with an explicit coupling,
// so that time-dependent drives can reuse it.
template <typename Scalar>
Eigen::Matrix<Scalar, 5, 1> eom_packed(const Eigen::Matrix<Scalar, 5, 1>& y, const DickeParams<Scalar>& p,
                                       Scalar lambda) {
    using C = std::complex<Scalar>;
    const C a(y[0], y[1]);
    const C b(y[2], y[3]);
    const Scalar w = y[4];
    const Scalar s = Scalar(1) / std::sqrt(p.atom_number);
    const Scalar x = 2 * a.real();   // alpha + alpha*
    const C I(0, 1);

    const C da = -C(p.kappa, p.omega) * a - I * (lambda * s) * (2 * b.real())
                 - I * (p.lambda_prime * s) * (p.atom_number / 2 - w);
    const C db = -I * p.omega0 * b + I * (2 * lambda * s * x * w) + I * (p.lambda_prime * s * x) * b;
    // i (beta - beta*) = -2 Im beta
    const Scalar dw = -2 * lambda * s * x * b.imag();

    Eigen::Matrix<Scalar, 5, 1> out;
    out << da.real(), da.imag(), db.real(), db.imag(), dw;
    return out;
}

} // namespace detail

template <typename Scalar>
MeanFieldState<Scalar> eom_rhs(const MeanFieldState<Scalar>& s, const DickeParams<Scalar>& p) {
    return MeanFieldState<Scalar>::from_vector(detail::eom_packed(s.to_vector(), p, p.lambda));
}

// Largest component of the fixed-point residual, in the units of the state.
template <typename Scalar>
Scalar fixed_point_residual(const MeanFieldState<Scalar>& s, const DickeParams<Scalar>& p) {
    return eom_rhs(s, p).to_vector().cwiseAbs().maxCoeff();
}

template <typename Scalar>
struct Trajectory {
    std::vector<Scalar> times;
    std::vector<MeanFieldState<Scalar>> states;
    ode::Stats stats;
};

// Adaptive Dormand-Prince integration from t0 to t1. With sample_times empty every
// accepted step is recorded; otherwise the dense output is evaluated at those times.
// Absolute tolerances scale like the components: sqrt(N) for alpha, N for beta and w.
template <typename Scalar>
Trajectory<Scalar> integrate(const MeanFieldState<Scalar>& s0, const DickeParams<Scalar>& p, Scalar t0, Scalar t1,
                             Scalar tol = Scalar(1e-10), const std::vector<Scalar>& sample_times = {}) {
    validate(p);
    if (!(tol > 0)) throw std::invalid_argument("meanfield::integrate: tol must be positive");
    if (!(t1 >= t0)) throw std::invalid_argument("meanfield::integrate: requires t1 >= t0");
    using State = Eigen::Matrix<Scalar, 5, 1>;

    ode::Options<State> opt;
    opt.rtol = tol;
    const Scalar ra = std::sqrt(p.atom_number), rb = p.atom_number;
    opt.atol = (State() << ra, ra, rb, rb, rb).finished() * (tol * Scalar(1e-2));
    auto f = [&p](Scalar, const State& y) { return detail::eom_packed(y, p, p.lambda); };

    Trajectory<Scalar> out;
    if (sample_times.empty()) {
        State y = s0.to_vector();
        out.times.push_back(t0);
        out.states.push_back(s0);
        out.stats = ode::integrate(f, y, t0, t1, opt, [&](const ode::DenseStep<State>& step) {
            out.times.push_back(step.t_new);
            out.states.push_back(MeanFieldState<Scalar>::from_vector(*step.y_new));
        });
    } else {
        for (Scalar t : sample_times) {
            if (t < t0 || t > t1) throw std::invalid_argument("meanfield::integrate: sample time outside [t0, t1]");
        }
        auto ys = ode::sample(f, s0.to_vector(), t0, sample_times, opt, &out.stats);
        out.times = sample_times;
        out.states.reserve(ys.size());
        for (const auto& y : ys) out.states.push_back(MeanFieldState<Scalar>::from_vector(y));
    }
    return out;
}

// Superradiant fixed points of the lambda' = 0 model, sign = +1 or -1 picks the branch
// (alpha and beta have opposite signs). Requires lambda > lambda_c.
template <typename Scalar>
MeanFieldState<Scalar> superradiant_state(const DickeParams<Scalar>& p, int sign) {
    using C = std::complex<Scalar>;
    const Scalar lc = critical_coupling(p);
    if (!(p.lambda > lc)) throw std::invalid_argument("superradiant_state: requires lambda > lambda_c");
    const Scalar q = lc * lc / (p.lambda * p.lambda);
    const Scalar r = std::sqrt(Scalar(1) - q * q);
    const Scalar sg = sign < 0 ? Scalar(-1) : Scalar(1);
    MeanFieldState<Scalar> s;
    s.alpha = sg * std::sqrt(p.atom_number) * p.lambda / C(p.omega, -p.kappa) * r;
    s.beta = C(-sg * p.atom_number / 2 * r, 0);
    s.w = -p.atom_number / 2 * q;
    return s;
}

// Linear response of the empty state to lambda': alpha = -i lambda' sqrt(N) / (kappa + i omega).
template <typename Scalar>
MeanFieldState<Scalar> linear_response_seed(const DickeParams<Scalar>& p) {
    using C = std::complex<Scalar>;
    MeanFieldState<Scalar> s = MeanFieldState<Scalar>::normal(p.atom_number);
    s.alpha = C(0, -p.lambda_prime) * std::sqrt(p.atom_number) / C(p.kappa, p.omega);
    return s;
}

template <typename Scalar>
struct NewtonOptions {
    Scalar tol = Scalar(1e-13);       // on the N-scaled residual
    int max_iterations = 100;
};

// Fixed point of the equations of motion on the physical sphere. Works in the scaled
// variables a = alpha/sqrt(N), b = beta/N, with w/N = -sqrt(1/4 - |b|^2) eliminated
// (the negative root), so the four real unknowns are (Re a, Im a, Re b, Im b).
template <typename Scalar>
MeanFieldState<Scalar> newton_steady_state(const DickeParams<Scalar>& p, const MeanFieldState<Scalar>& seed,
                                           const NewtonOptions<Scalar>& opt = {}) {
    validate(p);
    using V4 = Eigen::Matrix<Scalar, 4, 1>;
    using M4 = Eigen::Matrix<Scalar, 4, 4>;
    const Scalar N = p.atom_number, sqN = std::sqrt(N);
    const Scalar k = p.kappa, om = p.omega, om0 = p.omega0, l = p.lambda, lp = p.lambda_prime;

    auto inside = [](const V4& u) { return u[2] * u[2] + u[3] * u[3] < Scalar(0.25); };
    auto residual = [&](const V4& u, M4* jac) {
        const Scalar ar = u[0], ai = u[1], br = u[2], bi = u[3];
        const Scalar w = -std::sqrt(Scalar(0.25) - br * br - bi * bi);
        const Scalar x = 2 * ar;
        V4 F;
        F << -k * ar + om * ai,
             -om * ar - k * ai - 2 * l * br - lp * (Scalar(0.5) - w),
             om0 * bi - lp * x * bi,
             -om0 * br + 2 * l * x * w + lp * x * br;
        if (jac) {
            const Scalar dw_br = -br / w, dw_bi = -bi / w;
            *jac << -k, om, 0, 0,
                    -om, -k, -2 * l + lp * dw_br, lp * dw_bi,
                    -2 * lp * bi, 0, 0, om0 - lp * x,
                    2 * (2 * l * w + lp * br), 0, -om0 + 2 * l * x * dw_br + lp * x, 2 * l * x * dw_bi;
        }
        return F;
    };

    V4 u;
    u << seed.alpha.real() / sqN, seed.alpha.imag() / sqN, seed.beta.real() / N, seed.beta.imag() / N;
    if (!inside(u)) {
        // pull the seed just inside the sphere
        const Scalar r = std::sqrt(u[2] * u[2] + u[3] * u[3]);
        u.template tail<2>() *= Scalar(0.499999) / r;
    }

    M4 J;
    V4 F = residual(u, &J);
    Scalar fn = F.template lpNorm<Eigen::Infinity>();
    for (int it = 0; it < opt.max_iterations && !(fn <= opt.tol); ++it) {
        const V4 step = J.colPivHouseholderQr().solve(-F);
        if (!step.allFinite()) break;
        // backtracking: stay on the sphere and do not increase the residual by much
        Scalar t = 1;
        V4 trial;
        Scalar tn = std::numeric_limits<Scalar>::infinity();
        for (int ls = 0; ls < 40; ++ls, t /= 2) {
            trial = u + t * step;
            if (!inside(trial)) continue;
            tn = residual(trial, nullptr).template lpNorm<Eigen::Infinity>();
            if (!std::isfinite(static_cast<double>(tn))) continue;
            if (tn < (1 - Scalar(1e-4) * t) * fn || (tn <= opt.tol)) break;
        }
        if (!std::isfinite(static_cast<double>(tn)) || !inside(trial)) break;
        u = trial;
        F = residual(u, &J);
        fn = F.template lpNorm<Eigen::Infinity>();
    }
    if (!(fn <= opt.tol)) {
        throw ConvergenceError("newton_steady_state: no convergence (scaled residual " + std::to_string(fn) + ")",
                               static_cast<double>(p.lambda));
    }

    using C = std::complex<Scalar>;
    MeanFieldState<Scalar> s;
    s.alpha = C(u[0], u[1]) * sqN;
    s.beta = C(u[2], u[3]) * N;
    s.w = -N * std::sqrt(Scalar(0.25) - u[2] * u[2] - u[3] * u[3]);
    return s;
}

} // namespace dicke
