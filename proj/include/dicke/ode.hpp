// ode.hpp: Dormand-Prince 5(4) integrator with continuous (dense) output
//
// State is any fixed or dynamic Eigen column vector. The right-hand side is
// called as f(t, y) and must return a State.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicke/errors.hpp"

namespace dicke::ode {

template <typename State>
struct Options {
    using Scalar = typename State::Scalar;
    Scalar rtol = Scalar(1e-10);
    std::optional<State> atol;  // per component; unset means 1e-12 everywhere
    Scalar initial_step = 0;    // 0 picks a step from the local derivative scale
    Scalar min_step = 0;        // 0 means 1e4 * eps * |t|
    Scalar max_step = std::numeric_limits<Scalar>::infinity();
    std::size_t max_steps = 100'000'000;
};

struct Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t evaluations = 0;
};

// One accepted step together with its interpolant.
template <typename State>
struct DenseStep {
    using Scalar = typename State::Scalar;
    Scalar t_old, t_new;
    const State* y_old;
    const State* y_new;
    State r2, r3, r4, r5;

    State operator()(Scalar t) const {
        const Scalar h = t_new - t_old;
        const Scalar th = (t - t_old) / h;
        const Scalar th1 = Scalar(1) - th;
        return *y_old + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
    }
};

namespace detail {

template <typename State>
std::vector<double> to_doubles(const State& y) {
    std::vector<double> out(static_cast<std::size_t>(y.size()));
    for (Eigen::Index i = 0; i < y.size(); ++i) out[static_cast<std::size_t>(i)] = static_cast<double>(y[i]);
    return out;
}

template <typename State>
typename State::Scalar error_norm(const State& err, const State& y0, const State& y1, const State& atol,
                                  typename State::Scalar rtol) {
    using Scalar = typename State::Scalar;
    Scalar acc = 0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const Scalar sc = atol[i] + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const Scalar r = err[i] / sc;
        acc += r * r;
    }
    return std::sqrt(acc / Scalar(err.size()));
}

} // namespace detail

// Integrates y from t0 to t1 in place. on_step(const DenseStep&) fires after every
// accepted step.
template <typename State, typename Rhs, typename Observer>
Stats integrate(Rhs&& f, State& y, typename State::Scalar t0, typename State::Scalar t1,
                const Options<State>& opt, Observer&& on_step) {
    using Scalar = typename State::Scalar;
    constexpr Scalar c2 = Scalar(1) / 5, c3 = Scalar(3) / 10, c4 = Scalar(4) / 5, c5 = Scalar(8) / 9;
    constexpr Scalar a21 = Scalar(1) / 5;
    constexpr Scalar a31 = Scalar(3) / 40, a32 = Scalar(9) / 40;
    constexpr Scalar a41 = Scalar(44) / 45, a42 = Scalar(-56) / 15, a43 = Scalar(32) / 9;
    constexpr Scalar a51 = Scalar(19372) / 6561, a52 = Scalar(-25360) / 2187, a53 = Scalar(64448) / 6561,
                     a54 = Scalar(-212) / 729;
    constexpr Scalar a61 = Scalar(9017) / 3168, a62 = Scalar(-355) / 33, a63 = Scalar(46732) / 5247,
                     a64 = Scalar(49) / 176, a65 = Scalar(-5103) / 18656;
    constexpr Scalar a71 = Scalar(35) / 384, a73 = Scalar(500) / 1113, a74 = Scalar(125) / 192,
                     a75 = Scalar(-2187) / 6784, a76 = Scalar(11) / 84;
    constexpr Scalar e1 = Scalar(71) / 57600, e3 = Scalar(-71) / 16695, e4 = Scalar(71) / 1920,
                     e5 = Scalar(-17253) / 339200, e6 = Scalar(22) / 525, e7 = Scalar(-1) / 40;
    constexpr Scalar d1 = Scalar(-12715105075.0L / 11282082432.0L), d3 = Scalar(87487479700.0L / 32700410799.0L),
                     d4 = Scalar(-10690763975.0L / 1880347072.0L), d5 = Scalar(701980252875.0L / 199316789632.0L),
                     d6 = Scalar(-1453857185.0L / 822651844.0L), d7 = Scalar(69997945.0L / 29380423.0L);

    if (!(opt.rtol > 0)) throw std::invalid_argument("ode::integrate: rtol must be positive");
    Stats stats;
    if (t1 == t0) return stats;
    const Scalar dir = t1 > t0 ? Scalar(1) : Scalar(-1);

    const State atol = opt.atol ? *opt.atol : State(State::Constant(y.size(), Scalar(1e-12)));
    if (atol.size() != y.size()) throw std::invalid_argument("ode::integrate: atol has the wrong size");

    State k1 = f(t0, y);
    ++stats.evaluations;

    Scalar h = opt.initial_step;
    if (!(h > 0)) {
        // Hairer & Wanner's starting-step heuristic.
        Scalar d0 = 0, dd1 = 0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const Scalar sc = atol[i] + opt.rtol * std::abs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            dd1 += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / Scalar(y.size()));
        dd1 = std::sqrt(dd1 / Scalar(y.size()));
        h = (d0 < Scalar(1e-5) || dd1 < Scalar(1e-5)) ? Scalar(1e-6) : Scalar(0.01) * d0 / dd1;
        h = std::min(h, std::abs(t1 - t0));
        State y1 = y + dir * h * k1;
        State k2 = f(t0 + dir * h, y1);
        ++stats.evaluations;
        Scalar d2 = 0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const Scalar sc = atol[i] + opt.rtol * std::abs(y[i]);
            const Scalar r = (k2[i] - k1[i]) / sc;
            d2 += r * r;
        }
        d2 = std::sqrt(d2 / Scalar(y.size())) / h;
        const Scalar dm = std::max(dd1, d2);
        const Scalar h1 = dm <= Scalar(1e-15) ? std::max(Scalar(1e-6), h * Scalar(1e-3))
                                              : std::pow(Scalar(0.01) / dm, Scalar(0.2));
        h = std::min({Scalar(100) * h, h1, std::abs(t1 - t0)});
    }
    h = std::min(h, opt.max_step);

    Scalar t = t0;
    State y_old;
    DenseStep<State> dense;
    bool last_rejected = false;

    while (dir * (t1 - t) > 0) {
        if (stats.accepted + stats.rejected >= opt.max_steps) {
            throw StiffnessError("ode::integrate: step budget exhausted", static_cast<double>(t),
                                 static_cast<double>(h), detail::to_doubles(y));
        }
        const Scalar min_step = opt.min_step > 0
            ? opt.min_step
            : Scalar(1e4) * std::numeric_limits<Scalar>::epsilon() * std::max(std::abs(t), Scalar(1));
        if (h < min_step) {
            throw StiffnessError("ode::integrate: step size underflow (problem too stiff?)",
                                 static_cast<double>(t), static_cast<double>(h), detail::to_doubles(y));
        }
        if (dir * (t + dir * h - t1) > 0) h = std::abs(t1 - t);

        const Scalar hs = dir * h;
        const State k2 = f(t + c2 * hs, y + hs * (a21 * k1));
        const State k3 = f(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
        const State k4 = f(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
        const State k5 = f(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const State k6 = f(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const State y_new = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const State k7 = f(t + hs, y_new);
        stats.evaluations += 6;

        const State err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const Scalar en = detail::error_norm(err, y, y_new, atol, opt.rtol);

        if (en <= 1) {
            y_old = y;
            const State ydiff = y_new - y;
            const State bspl = hs * k1 - ydiff;
            dense.t_old = t;
            dense.t_new = t + hs;
            dense.r2 = ydiff;
            dense.r3 = bspl;
            dense.r4 = ydiff - hs * k7 - bspl;
            dense.r5 = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            y = y_new;
            t = (dir * (t1 - (t + hs)) <= 0) ? t1 : t + hs;
            dense.t_new = t;
            dense.y_old = &y_old;
            dense.y_new = &y;
            k1 = k7;
            ++stats.accepted;
            on_step(static_cast<const DenseStep<State>&>(dense));

            Scalar fac = en > 0 ? Scalar(0.9) * std::pow(en, Scalar(-0.2)) : Scalar(5);
            fac = std::clamp(fac, Scalar(0.2), last_rejected ? Scalar(1) : Scalar(5));
            h = std::min(h * fac, opt.max_step);
            last_rejected = false;
        } else {
            ++stats.rejected;
            const Scalar fac = std::isfinite(static_cast<double>(en))
                ? std::max(Scalar(0.2), Scalar(0.9) * std::pow(en, Scalar(-0.2)))
                : Scalar(0.1);
            h *= fac;
            last_rejected = true;
        }
    }
    return stats;
}

template <typename State, typename Rhs>
Stats integrate(Rhs&& f, State& y, typename State::Scalar t0, typename State::Scalar t1,
                const Options<State>& opt) {
    return integrate(std::forward<Rhs>(f), y, t0, t1, opt, [](const DenseStep<State>&) {});
}

// States at the requested (monotone, within [t0, last]) output times.
template <typename State, typename Rhs>
std::vector<State> sample(Rhs&& f, const State& y0, typename State::Scalar t0,
                          const std::vector<typename State::Scalar>& times, const Options<State>& opt,
                          Stats* stats_out = nullptr) {
    using Scalar = typename State::Scalar;
    std::vector<State> out;
    out.reserve(times.size());
    if (times.empty()) return out;
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] < times[i - 1]) throw std::invalid_argument("ode::sample: output times must be sorted");
    }
    if (times.front() < t0) throw std::invalid_argument("ode::sample: output time before t0");

    std::size_t next = 0;
    while (next < times.size() && times[next] == t0) {
        out.push_back(y0);
        ++next;
    }
    State y = y0;
    const Scalar t_end = times.back();
    auto stats = integrate(f, y, t0, t_end, opt, [&](const DenseStep<State>& step) {
        while (next < times.size() && times[next] <= step.t_new) {
            out.push_back(times[next] == step.t_new ? *step.y_new : step(times[next]));
            ++next;
        }
    });
    while (next < times.size()) {
        out.push_back(y);
        ++next;
    }
    if (stats_out) *stats_out = stats;
    return out;
}

} // namespace dicke::ode
