// oracles.hpp: independent reference computations for the unit tests
//
// Nothing here calls into the library's solvers; each oracle uses a different
// route (brute force, closed form, fixed-step integration or frozen high-precision
// values) to the quantity it checks.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using M4 = Eigen::Matrix<C, 4, 4>;

// Composite Simpson rule, n even.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    if (n % 2) ++n;
    const double h = (b - a) / double(n);
    double s = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i) s += f(a + h * double(i)) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

// Closed-form overlaps for a trap of length D displaced by d in a cavity of length L
// (all in pump wavelengths, L an integer, k_n = 2 pi).
struct Overlaps {
    double cavity_norm, cavity_excited, cavity_uniform;
};
inline Overlaps closed_overlaps(double D, double L, double d) {
    const double pi = std::numbers::pi;
    return {D / (2 * L), std::sqrt(D / (2 * L)) * std::cos(2 * pi * d), -std::sin(2 * pi * d) / (pi * std::sqrt(D * L))};
}

// Normal-phase characteristic polynomial in the mode frequency nu (h ~ exp(-i nu t)):
//   (omega0^2 - nu^2) [(kappa - i nu)^2 + omega^2] - 4 lambda^2 omega omega0
inline C normal_characteristic(C nu, double omega, double omega0, double kappa, double lambda) {
    const C I(0, 1);
    return (omega0 * omega0 - nu * nu) * ((kappa - I * nu) * (kappa - I * nu) + omega * omega) -
           4 * lambda * lambda * omega * omega0;
}

// Overdamped-window edges for omega = 300, omega0 = 1, kappa = 200, frozen from a
// 40-digit mpmath computation (double root of the normal-phase polynomial for the lower
// edge, coalescence of the soft superradiant pair for the upper edge).
inline constexpr double window_lower = 10.408317679809525197;
inline constexpr double window_upper = 10.408336156111276229;
inline constexpr double window_lower_damping = 0.0015384606280673212;   // -Im nu of the double root

// Right-hand sides of the reference below-threshold moment equations (lambda' = 0,
// coefficients omega0 and lambda). Arguments are the ten moments in library order:
// cc, c+c+, c+c, dd, d+d+, d+d, cd, c+d+, c+d, cd+.
struct ReferenceRows {
    C cc, cdag_c, ddag_ddag, ddag_d, cd, cdag_d;
};
inline ReferenceRows reference_rows(const std::array<C, 10>& m, double omega, double omega0, double kappa, double lambda) {
    const C I(0, 1);
    const C cc = m[0], cdcd = m[1], cdc = m[2], dd = m[3], dddd = m[4], ddd = m[5], cd = m[6], cdd = m[7],
            cdagd = m[8], cddag = m[9];
    ReferenceRows r;
    r.cc = -(2.0 * I * omega + 2 * kappa) * cc - 2.0 * I * lambda * (cd + cddag);
    r.cdag_c = -2 * kappa * cdc - I * lambda * (cdd + cdagd - cddag - cd);
    r.ddag_ddag = 2.0 * I * omega0 * dddd + 2.0 * I * lambda * (cdd + cddag);
    r.ddag_d = I * lambda * (cdagd + cd - cddag - cdd);
    r.cd = -(I * omega0 + I * omega + kappa) * cd - I * lambda * (cc + dd + cdc + ddd + 1.0);
    r.cdag_d = (-I * omega0 + I * omega - kappa) * cdagd + I * lambda * (-cdcd + dd - cdc + ddd);
    return r;
}

// <(A1 + O1)(A2 + O2)(A3 + O3)(A4 + O4)> for zero-mean Gaussian fluctuations O_i with
// displacements A_i and ordered pair averages P(i, j) = <O_i O_j>, i < j.
inline C gaussian_four_point(const std::array<C, 4>& A, const std::function<C(int, int)>& P) {
    C total = A[0] * A[1] * A[2] * A[3];
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            C rest = 1;
            for (int k = 0; k < 4; ++k) {
                if (k != i && k != j) rest *= A[k];
            }
            total += P(i, j) * rest;
        }
    }
    total += P(0, 1) * P(2, 3) + P(0, 2) * P(1, 3) + P(0, 3) * P(1, 2);
    return total;
}

// g2(tau) of the output field from the four-point average, with
//   n = <c+c>, X = <c+(tau) c(0)>, Y = <c(tau) c(0)>.
inline double g2_from_wick(C alpha, double n, C X, C Y) {
    const std::array<C, 4> A{std::conj(alpha), std::conj(alpha), alpha, alpha};
    // operator order c+(0) c+(tau) c(tau) c(0)
    auto P = [&](int i, int j) -> C {
        if (i == 0 && j == 1) return std::conj(Y);
        if (i == 0 && j == 2) return std::conj(X);
        if (i == 0 && j == 3) return n;
        if (i == 1 && j == 2) return n;
        if (i == 1 && j == 3) return X;
        return Y;   // (2, 3)
    };
    const double norm = n + std::norm(alpha);
    return gaussian_four_point(A, P).real() / (norm * norm);
}

// Classical fourth-order Runge-Kutta on X' = M X with a fixed step.
inline M4 rk4_propagate(const M4& M, M4 X, double t, std::size_t steps) {
    const double h = t / double(steps);
    for (std::size_t s = 0; s < steps; ++s) {
        const M4 k1 = M * X;
        const M4 k2 = M * (X + 0.5 * h * k1);
        const M4 k3 = M * (X + 0.5 * h * k2);
        const M4 k4 = M * (X + h * k3);
        X += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return X;
}

// Monodromy trace of u'' + [A - 2 eps cos(nu t)] u = 0 by fixed-step RK4.
inline double mathieu_trace_rk4(double A, double eps, double nu, std::size_t steps = 20000) {
    const double T = 2 * std::numbers::pi / nu, h = T / double(steps);
    using V = Eigen::Vector4d;
    auto f = [&](double t, const V& y) {
        const double q = A - 2 * eps * std::cos(nu * t);
        return V(y[1], -q * y[0], y[3], -q * y[2]);
    };
    V y(1, 0, 0, 1);
    double t = 0;
    for (std::size_t s = 0; s < steps; ++s, t += h) {
        const V k1 = f(t, y), k2 = f(t + h / 2, y + h / 2 * k1), k3 = f(t + h / 2, y + h / 2 * k2),
                k4 = f(t + h, y + h * k3);
        y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return y[0] + y[3];
}

// Edges of the first Mathieu tongue in standard form y'' + (a - 2 q cos 2z) y = 0,
// series in q: b1 = 1 - q - q^2/8 + q^3/64, a1 = 1 + q - q^2/8 - q^3/64.
inline std::array<double, 2> mathieu_first_tongue(double q) {
    return {1 - q - q * q / 8 + q * q * q / 64, 1 + q - q * q / 8 - q * q * q / 64};
}

// Central-difference Jacobian of a vector field.
template <typename F>
Eigen::MatrixXd jacobian(F&& f, const Eigen::VectorXd& y, double rel_step = 1e-6) {
    const Eigen::Index n = y.size();
    Eigen::MatrixXd J(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double h = rel_step * std::max(1.0, std::abs(y[j]));
        Eigen::VectorXd yp = y, ym = y;
        yp[j] += h;
        ym[j] -= h;
        J.col(j) = (f(yp) - f(ym)) / (2 * h);
    }
    return J;
}

} // namespace oracle
