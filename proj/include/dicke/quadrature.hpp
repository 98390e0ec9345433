// quadrature.hpp: globally adaptive Gauss-Kronrod (7/15) integration

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "dicke/errors.hpp"

namespace dicke::quad {

template <typename Scalar>
struct QuadratureResult {
    Scalar value{0};
    Scalar error{0};
    std::size_t evaluations{0};
    std::size_t intervals{0};
};

template <typename Scalar>
struct QuadratureOptions {
    Scalar rel_tol = Scalar(1e-10);
    Scalar abs_tol = Scalar(0);
    // Initial uniform partition; oscillatory integrands want about one piece per period.
    std::size_t initial_segments = 1;
    std::size_t max_intervals = 200000;
};

namespace detail {

// Kronrod abscissae on [0,1] (symmetric), odd indices are the Gauss-7 nodes.
template <typename Scalar>
inline constexpr std::array<Scalar, 8> kronrod_nodes{
    Scalar(0.991455371120812639206854697526329L), Scalar(0.949107912342758524526189684047851L),
    Scalar(0.864864423359769072789712788640926L), Scalar(0.741531185599394439863864773280788L),
    Scalar(0.586087235467691130294144845693013L), Scalar(0.405845151377397166906606412076961L),
    Scalar(0.207784955007898467600689403773245L), Scalar(0)};

template <typename Scalar>
inline constexpr std::array<Scalar, 8> kronrod_weights{
    Scalar(0.022935322010529224963732008058970L), Scalar(0.063092092629978553290700663189204L),
    Scalar(0.104790010322250183839876322541518L), Scalar(0.140653259715525918745189590510238L),
    Scalar(0.169004726639267902826583426598550L), Scalar(0.190350578064785409913256402421014L),
    Scalar(0.204432940075298892414161999234649L), Scalar(0.209482141084727828012999174891714L)};

template <typename Scalar>
inline constexpr std::array<Scalar, 4> gauss_weights{
    Scalar(0.129484966168869693270611432679082L), Scalar(0.279705391489276667901467771423780L),
    Scalar(0.381830050505118944950369775488975L), Scalar(0.417959183673469387755102040816327L)};

template <typename Scalar>
struct Interval {
    Scalar a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

template <typename Scalar, typename F>
Interval<Scalar> kronrod15(F& f, Scalar a, Scalar b) {
    const Scalar center = (a + b) / 2;
    const Scalar half = (b - a) / 2;
    const auto& x = kronrod_nodes<Scalar>;
    const auto& wk = kronrod_weights<Scalar>;
    const auto& wg = gauss_weights<Scalar>;

    const Scalar fc = f(center);
    Scalar kron = wk[7] * fc;
    Scalar gauss = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const Scalar dx = half * x[j];
        const Scalar fsum = f(center - dx) + f(center + dx);
        kron += wk[j] * fsum;
        if (j % 2 == 1) gauss += wg[j / 2] * fsum;
    }
    kron *= half;
    gauss *= half;
    return {a, b, kron, std::abs(kron - gauss)};
}

} // namespace detail

// Integrates f over [a, b]; stops when the summed error estimate drops below
// max(abs_tol, rel_tol * |integral|).
template <typename Scalar, typename F>
QuadratureResult<Scalar> integrate(F&& f, Scalar a, Scalar b, const QuadratureOptions<Scalar>& opt = {}) {
    if (!(b >= a)) throw std::invalid_argument("quad::integrate: requires a <= b");
    QuadratureResult<Scalar> out;
    if (a == b) return out;

    const std::size_t nseg = std::max<std::size_t>(1, opt.initial_segments);
    std::priority_queue<detail::Interval<Scalar>> heap;
    Scalar total = 0, total_err = 0;
    for (std::size_t i = 0; i < nseg; ++i) {
        const Scalar lo = a + (b - a) * Scalar(i) / Scalar(nseg);
        const Scalar hi = (i + 1 == nseg) ? b : a + (b - a) * Scalar(i + 1) / Scalar(nseg);
        auto iv = detail::kronrod15<Scalar>(f, lo, hi);
        total += iv.value;
        total_err += iv.error;
        heap.push(iv);
    }
    out.evaluations = 15 * nseg;

    auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
    const Scalar tiny = std::numeric_limits<Scalar>::epsilon() * 50;

    while (total_err > tolerance()) {
        if (heap.size() >= opt.max_intervals) {
            throw NumericError("quad::integrate: interval budget exhausted before reaching tolerance");
        }
        auto worst = heap.top();
        if ((worst.b - worst.a) <= tiny * std::max(std::abs(worst.a), std::abs(worst.b))) break;
        heap.pop();
        const Scalar mid = (worst.a + worst.b) / 2;
        auto left = detail::kronrod15<Scalar>(f, worst.a, mid);
        auto right = detail::kronrod15<Scalar>(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the leaves so the running-update cancellation doesn't leak into the result.
    total = 0;
    total_err = 0;
    out.intervals = heap.size();
    std::vector<detail::Interval<Scalar>> leaves;
    leaves.reserve(heap.size());
    while (!heap.empty()) {
        leaves.push_back(heap.top());
        heap.pop();
    }
    std::sort(leaves.begin(), leaves.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
    for (const auto& iv : leaves) {
        total += iv.value;
        total_err += iv.error;
    }
    out.value = total;
    out.error = total_err;
    return out;
}

} // namespace dicke::quad
