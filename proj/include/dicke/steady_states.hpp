// steady_states.hpp: steady-state branches over a coupling grid, with stability

#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dicke/errors.hpp"
#include "dicke/fluctuations.hpp"
#include "dicke/meanfield.hpp"
#include "dicke/types.hpp"

namespace dicke {

enum class Stability { stable, unstable, marginal };

inline const char* to_string(Stability s) {
    switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
    }
    return "?";
}

template <typename Scalar>
struct BranchPoint {
    MeanFieldState<Scalar> state;
    Stability stability{Stability::marginal};
    Scalar growth_rate{0};   // max Re mu_k of the fluctuation matrix
    std::string label;       // "normal", "superradiant+", "superradiant-", "continued", "secondary"
};

template <typename Scalar>
struct SteadyStateBranch {
    std::vector<Scalar> lambdas;
    std::vector<std::vector<BranchPoint<Scalar>>> points;   // points[i] belong to lambdas[i]
};

// Stability from the fluctuation spectrum; |max Re mu| below marginal_tol is marginal.
template <typename Scalar>
BranchPoint<Scalar> classify(const MeanFieldState<Scalar>& s, const DickeParams<Scalar>& p, std::string label,
                             Scalar marginal_tol = Scalar(1e-12)) {
    BranchPoint<Scalar> bp;
    bp.state = s;
    bp.label = std::move(label);
    bp.growth_rate = spectrum(dynamical_matrix(s, p), false).max_growth_rate();
    if (bp.growth_rate < -marginal_tol) bp.stability = Stability::stable;
    else if (bp.growth_rate > marginal_tol) bp.stability = Stability::unstable;
    else bp.stability = Stability::marginal;
    return bp;
}

namespace detail {

template <typename Scalar>
bool same_state(const MeanFieldState<Scalar>& a, const MeanFieldState<Scalar>& b, Scalar N) {
    const Scalar da = std::abs(a.alpha - b.alpha) / std::sqrt(N);
    const Scalar db = std::abs(a.beta - b.beta) / N;
    return std::max(da, db) < Scalar(1e-7);
}

// Natural continuation of a fixed point from `from` (a solution at lambda0) to lambda1.
// Steps are capped at 2% of lambda_c and seeded by secant extrapolation; a step is halved
// when Newton fails, when the state jumps by more than max_jump in the scaled variables,
// or when a stable state would turn unstable (a jump onto a different branch; the branch
// connected to lambda = 0 of an imperfect pitchfork never loses stability).
// `at(l)` returns the parameters at coupling l.
template <typename Scalar, typename ParamsAt>
MeanFieldState<Scalar> continue_along(const ParamsAt& at, MeanFieldState<Scalar> from, Scalar lambda0,
                                      Scalar lambda1, Scalar max_jump = Scalar(0.02)) {
    const Scalar N = at(lambda0).atom_number;
    const Scalar min_step = Scalar(1e-10) * std::max(std::abs(lambda1), Scalar(1));
    const Scalar max_step = Scalar(0.02) * critical_coupling(at(lambda0));
    auto growth = [&](const MeanFieldState<Scalar>& s, Scalar l) {
        return spectrum(dynamical_matrix(s, at(l)), false).max_growth_rate();
    };
    bool stable = growth(from, lambda0) < 0;
    Scalar l = lambda0;
    Scalar h = std::clamp(lambda1 - lambda0, -max_step, max_step);
    MeanFieldState<Scalar> prev = from;
    Scalar prev_h = 0;
    while (l != lambda1) {
        const Scalar target = std::abs(lambda1 - l) <= std::abs(h) ? lambda1 : l + h;
        MeanFieldState<Scalar> seed = from;
        if (prev_h != 0) {
            const Scalar r = (target - l) / prev_h;
            seed.alpha += r * (from.alpha - prev.alpha);
            seed.beta += r * (from.beta - prev.beta);
        }
        bool ok = false;
        MeanFieldState<Scalar> s;
        try {
            s = newton_steady_state(at(target), seed);
            const Scalar da = std::abs(s.alpha - from.alpha) / std::sqrt(N);
            const Scalar db = std::abs(s.beta - from.beta) / N;
            ok = std::max(da, db) <= max_jump && !(stable && growth(s, target) > 0);
        } catch (const ConvergenceError&) {
            ok = false;
        }
        if (ok) {
            prev = from;
            prev_h = target - l;
            from = s;
            l = target;
            h = std::clamp(h * Scalar(1.5), -max_step, max_step);
        } else {
            h /= 2;
            if (std::abs(h) < min_step) {
                throw ConvergenceError("steady-state continuation stalled", static_cast<double>(l));
            }
        }
    }
    return from;
}

template <typename Scalar>
MeanFieldState<Scalar> continue_to(const DickeParams<Scalar>& p, MeanFieldState<Scalar> from, Scalar lambda0,
                                   Scalar lambda1, Scalar max_jump = Scalar(0.02)) {
    return continue_along([&p](Scalar l) { return p.with_lambda(l); }, from, lambda0, lambda1, max_jump);
}

template <typename Scalar, typename ParamsAt>
SteadyStateBranch<Scalar> branch_scan(const DickeParams<Scalar>& p, const std::vector<Scalar>& grid,
                                      const ParamsAt& at, bool zero_field) {
    validate(p);
    if (grid.empty()) throw std::invalid_argument("steady_states: empty lambda grid");
    if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("steady_states: grid must be sorted");
    const Scalar N = p.atom_number;
    const Scalar lc = critical_coupling(p);

    SteadyStateBranch<Scalar> out;
    out.lambdas = grid;
    out.points.resize(grid.size());

    if (zero_field) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto q = p.with_lambda(grid[i]).with_lambda_prime(0);
            out.points[i].push_back(classify(MeanFieldState<Scalar>::normal(N), q, "normal"));
            if (grid[i] > lc) {
                out.points[i].push_back(classify(superradiant_state(q, +1), q, "superradiant+"));
                out.points[i].push_back(classify(superradiant_state(q, -1), q, "superradiant-"));
            }
        }
        return out;
    }

    MeanFieldState<Scalar> cont = newton_steady_state(at(grid.front()), linear_response_seed(at(grid.front())));
    std::vector<MeanFieldState<Scalar>> secondary;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto q = at(grid[i]);
        if (i > 0) cont = continue_along(at, cont, grid[i - 1], grid[i]);
        out.points[i].push_back(classify(cont, q, "continued"));

        std::vector<MeanFieldState<Scalar>> seeds = secondary;
        seeds.push_back(MeanFieldState<Scalar>::normal(N));
        if (grid[i] > lc) {
            const auto q0 = q.with_lambda_prime(0);
            seeds.push_back(superradiant_state(q0, +1));
            seeds.push_back(superradiant_state(q0, -1));
        }
        secondary.clear();
        for (const auto& seed : seeds) {
            MeanFieldState<Scalar> s;
            try {
                s = newton_steady_state(q, seed);
            } catch (const ConvergenceError&) {
                continue;
            }
            bool dup = same_state(s, cont, N);
            for (const auto& t : secondary) dup = dup || same_state(s, t, N);
            if (!dup) secondary.push_back(s);
        }
        for (const auto& s : secondary) out.points[i].push_back(classify(s, q, "secondary"));
    }
    return out;
}

} // namespace detail

// All steady states on the grid. For lambda' = 0: the normal state plus, above lambda_c,
// the two closed-form superradiant states. For lambda' != 0: the branch continued from
// the linear-response seed at the first grid point ("continued"; its failure throws),
// plus any further fixed points reached from the superradiant and normal-state seeds
// or from the previous grid point ("secondary").
template <typename Scalar>
SteadyStateBranch<Scalar> steady_states(const DickeParams<Scalar>& p, const std::vector<Scalar>& grid) {
    return detail::branch_scan(p, grid, [&p](Scalar l) { return p.with_lambda(l); }, p.lambda_prime == 0);
}

// As steady_states, but with lambda' = ratio * lambda at every grid point (both
// couplings scale with the pump strength); p.lambda_prime is ignored.
template <typename Scalar>
SteadyStateBranch<Scalar> steady_states_proportional(const DickeParams<Scalar>& p, const std::vector<Scalar>& grid,
                                                     Scalar ratio) {
    return detail::branch_scan(
        p, grid, [&p, ratio](Scalar l) { return p.with_lambda(l).with_lambda_prime(ratio * l); }, ratio == 0);
}

// The physically selected steady state at p.lambda: the normal state below lambda_c
// (or the superradiant state with Re alpha > 0 above it) for lambda' = 0, and the
// branch continued from lambda = 0 for lambda' != 0.
template <typename Scalar>
MeanFieldState<Scalar> primary_steady_state(const DickeParams<Scalar>& p) {
    validate(p);
    if (p.lambda_prime == 0) {
        if (p.lambda > critical_coupling(p)) {
            auto s = superradiant_state(p, +1);
            return s.alpha.real() >= 0 ? s : superradiant_state(p, -1);
        }
        return MeanFieldState<Scalar>::normal(p.atom_number);
    }
    const auto q0 = p.with_lambda(0);
    return detail::continue_to(p, newton_steady_state(q0, linear_response_seed(q0)), Scalar(0), p.lambda);
}

} // namespace dicke
