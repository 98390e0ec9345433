#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "dicke/fluctuations.hpp"
#include "dicke/steady_states.hpp"
#include "oracles.hpp"

using namespace dicke;
using C = std::complex<double>;

namespace {

DickeParamsd base(double lambda = 0, double lambda_prime = 0) {
    DickeParamsd p;
    p.lambda = lambda;
    p.lambda_prime = lambda_prime;
    return p;
}

// Eigenvalues mu of the mean-field Jacobian, minus the zero mode of the conserved length.
std::vector<C> jacobian_rates(const DickeParamsd& p, const MeanFieldStated& s) {
    auto f = [&](const Eigen::VectorXd& y) {
        Eigen::Matrix<double, 5, 1> v = y;
        return Eigen::VectorXd(detail::eom_packed(v, p, p.lambda));
    };
    const Eigen::VectorXd y = s.to_vector();
    const Eigen::MatrixXd J = oracle::jacobian(f, y, 1e-7);
    Eigen::EigenSolver<Eigen::MatrixXd> es(J);
    std::vector<C> mu(es.eigenvalues().data(), es.eigenvalues().data() + 5);
    std::sort(mu.begin(), mu.end(), [](C a, C b) { return std::abs(a) < std::abs(b); });
    mu.erase(mu.begin());
    return mu;
}

double match(std::vector<C> a, std::vector<C> b) {
    double worst = 0;
    for (const C& x : a) {
        double best = 1e300;
        for (const C& y : b) best = std::min(best, std::abs(x - y));
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace

TEST_SUITE("fluctuations") {

TEST_CASE("normal-phase frequencies are roots of the characteristic polynomial") {
    const auto p = base();
    const double lc = critical_coupling(p);
    for (double f : {0.1, 0.5, 0.9, 0.999}) {
        const auto q = p.with_lambda(f * lc);
        const auto sp = spectrum(dynamical_matrix(MeanFieldStated::normal(q.atom_number), q));
        for (const C& nu : sp.frequencies) {
            const double scale = 4 * q.lambda * q.lambda * q.omega * q.omega0 + std::pow(std::abs(nu), 4) + 1;
            CHECK(std::abs(oracle::normal_characteristic(nu, q.omega, q.omega0, q.kappa, q.lambda)) < 1e-10 * scale);
        }
        const C ex = sp.polariton_frequency();
        CHECK(std::abs(ex.real()) < 2);
        CHECK(ex.imag() < 0);
    }
}

TEST_CASE("HP spectrum equals the mean-field Jacobian spectrum above threshold and with a field") {
    for (auto [l, lp] : std::vector<std::pair<double, double>>{{12, 0}, {15, 0}, {5, 0.1}, {12, 0.2}, {20, -0.3}}) {
        const auto p = base(l, lp);
        const auto s = primary_steady_state(p);
        const auto sp = spectrum(dynamical_matrix(s, p));
        std::vector<C> mu;
        for (const C& w : sp.frequencies) mu.push_back(C(0, -1) * w);   // mu = -i omega
        const auto jac = jacobian_rates(p, s);
        CHECK(match(mu, jac) < 1e-5);
        CHECK(match(jac, mu) < 1e-5);
    }
}

TEST_CASE("spectrum comes in conjugate pairs") {
    const auto p = base(12, 0.1);
    const auto sp = spectrum(dynamical_matrix(primary_steady_state(p), p));
    std::vector<C> f(sp.frequencies.begin(), sp.frequencies.end());
    std::vector<C> mirrored;
    for (const C& w : f) mirrored.push_back(-std::conj(w));
    CHECK(match(f, mirrored) < 1e-9);
}

TEST_CASE("exact overdamped window lies inside the leading-order estimate") {
    const auto p = base();
    const double lc = critical_coupling(p);
    const auto est = overdamped_window(p);
    CHECK(est.lower < oracle::window_lower);
    CHECK(est.upper > oracle::window_upper);

    auto re_ex = [&](double l) {
        const auto q = p.with_lambda(l);
        return std::abs(spectrum(dynamical_matrix(primary_steady_state(q), q)).polariton_frequency().real());
    };
    const double e = std::pow(p.kappa * p.omega0 / (p.omega * p.omega + p.kappa * p.kappa), 2);
    const double inner = 0.02 * lc * e;
    CHECK(re_ex(oracle::window_lower + inner) < 1e-9);
    CHECK(re_ex(oracle::window_upper - inner) < 1e-9);
    CHECK(re_ex(lc) < 1e-9);
    CHECK(re_ex(oracle::window_lower - inner) > 1e-6);
    CHECK(re_ex(oracle::window_upper + inner) > 1e-6);

    // the double root at the lower edge
    const auto q = p.with_lambda(oracle::window_lower);
    const auto sp = spectrum(dynamical_matrix(MeanFieldStated::normal(q.atom_number), q));
    CHECK(std::abs(-sp.polariton_frequency().imag() - oracle::window_lower_damping) < 1e-6);
}

TEST_CASE("overdamped eigenvalue tracks the exact soft mode near threshold") {
    const auto p = base();
    const double lc = critical_coupling(p);
    const double l = lc * (1 - 1e-9);
    const auto sp = spectrum(dynamical_matrix(MeanFieldStated::normal(p.atom_number), p.with_lambda(l)));
    const C est = overdamped_eigenvalue(p, l);
    CHECK(std::abs(sp.polariton_frequency().imag() - est.imag()) < 0.01 * std::abs(est.imag()));
}

TEST_CASE("perturbative soft mode is accurate far below threshold") {
    const auto p = base();
    const double lc = critical_coupling(p);
    for (double f : {0.1, 0.5, 0.8}) {
        const auto q = p.with_lambda(f * lc);
        const C ex = spectrum(dynamical_matrix(MeanFieldStated::normal(q.atom_number), q)).polariton_frequency();
        const C pt = soft_mode_perturbative(p, f * lc);
        CHECK(std::abs(ex.real() - pt.real()) < 1e-4 * pt.real());
        CHECK(std::abs(ex.imag() - pt.imag()) < 0.05 * std::abs(pt.imag()));
    }
    CHECK_THROWS_AS(soft_mode_perturbative(p, lc), std::invalid_argument);
}

TEST_CASE("HP coefficients reduce to the bare ones in the normal phase") {
    const auto p = base(4);
    const auto c = hp_coefficients(MeanFieldStated::normal(p.atom_number), p);
    CHECK(c.omega0_prime == doctest::Approx(p.omega0));
    CHECK(c.g1 == doctest::Approx(0));
    CHECK(c.g2 == doctest::Approx(p.lambda));
    MeanFieldStated bad{0, C(0.6e6, 0), 0};
    CHECK_THROWS_AS(hp_coefficients(bad, p), std::invalid_argument);
}

TEST_CASE("spectrum_sweep keeps the polariton continuous") {
    const auto p = base();
    const double lc = critical_coupling(p);
    std::vector<double> grid;
    std::vector<MeanFieldStated> states;
    for (int i = 1; i <= 40; ++i) {
        grid.push_back(0.02 * i * lc);
        states.push_back(MeanFieldStated::normal(p.atom_number));
    }
    const auto sw = spectrum_sweep(p, grid, states);
    for (std::size_t i = 1; i < sw.size(); ++i) {
        CHECK(std::abs(sw[i].polariton_frequency() - sw[i - 1].polariton_frequency()) < 0.1);
    }
}

}
