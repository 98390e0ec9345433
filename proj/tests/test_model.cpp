#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dicke/model.hpp"
#include "dicke/meanfield.hpp"
#include "oracles.hpp"

using namespace dicke;

namespace {

// Rb-87 geometry in SI with an integer cavity length in pump wavelengths.
PhysicalParamsd rb(double d_over_lp) {
    PhysicalParamsd p;
    p.cavity_wavevector = 8055365.778435366;
    const double lp = 2 * std::numbers::pi / p.cavity_wavevector;
    p.pump_cavity_detuning = -7119916.034840588;
    p.dispersive_shift = -3.0;
    p.pump_coupling = 4667.104862239764;
    p.cavity_decay = 4742205.403550114;
    p.atom_number = 1e6;
    p.condensate_length = 12.5 * lp;
    p.cavity_length = 227 * lp;
    p.trap_displacement = d_over_lp * lp;
    p.atom_mass = 1.443e-25;
    return p;
}

} // namespace

TEST_SUITE("model") {

TEST_CASE("overlap integrals match closed forms and a brute-force rule") {
    for (double d : {0.0, 0.01, -0.02, 0.0361915}) {
        const auto m = mode_functions(rb(d));
        const auto ov = overlap_integrals(m);
        const auto cf = oracle::closed_overlaps(12.5, 227, d);
        CHECK(std::abs(ov.cavity_norm - cf.cavity_norm) < 1e-11);
        CHECK(std::abs(ov.cavity_excited - cf.cavity_excited) < 1e-11);
        CHECK(std::abs(ov.cavity_uniform - cf.cavity_uniform) < 1e-11);
        const double brute = oracle::simpson([&](double x) { return m.cavity(x) * m.phin(x); }, m.x_left, m.x_right,
                                             200000);
        CHECK(std::abs(ov.cavity_excited - brute) < 1e-9);
    }
}

TEST_CASE("mode functions are normalized on the trap") {
    const auto m = mode_functions(rb(0.02));
    auto sq = [](auto f) { return [f](double x) { return f(x) * f(x); }; };
    CHECK(std::abs(oracle::simpson(sq([&](double x) { return m.phi0(x); }), m.x_left, m.x_right, 20000) - 1) < 1e-10);
    CHECK(std::abs(oracle::simpson(sq([&](double x) { return m.phin(x); }), m.x_left, m.x_right, 20000) - 1) < 1e-10);
    const double cross =
        oracle::simpson([&](double x) { return m.phi0(x) * m.phin(x); }, m.x_left, m.x_right, 20000);
    CHECK(std::abs(cross) < 1e-10);
}

TEST_CASE("map_to_dicke reproduces the target Dicke point") {
    const auto q = map_to_dicke(rb(0.0361915));
    CHECK(q.omega0 == 1);
    CHECK(std::abs(q.omega - 300) < 1e-6);
    CHECK(std::abs(q.kappa - 200) < 1e-6);
    CHECK(std::abs(q.lambda - 9) < 1e-4);
    // lambda'/lambda = -sqrt(2) tan(2 pi d) / (pi D)
    const double ratio = -std::sqrt(2.0) * std::tan(2 * std::numbers::pi * 0.0361915) / (std::numbers::pi * 12.5);
    CHECK(std::abs(q.lambda_prime / q.lambda - ratio) < 1e-9);
}

TEST_CASE("lambda' vanishes for a centred trap and is odd in the displacement") {
    CHECK(std::abs(map_to_dicke(rb(0.0)).lambda_prime) < 1e-8);
    for (double d : {0.005, 0.02, 0.04}) {
        const auto a = map_to_dicke(rb(d)), b = map_to_dicke(rb(-d));
        CHECK(std::abs(a.lambda_prime + b.lambda_prime) < 1e-8 * std::abs(a.lambda_prime) + 1e-10);
        CHECK(std::abs(a.lambda - b.lambda) < 1e-8 * a.lambda);
    }
}

TEST_CASE("physical validation rejects bad geometry") {
    auto p = rb(0.0);
    p.trap_displacement = 0.2 * p.condensate_length;
    CHECK_THROWS_AS(mode_functions(p), std::invalid_argument);
    p = rb(0.0);
    p.condensate_length = 0;
    CHECK_THROWS_AS(mode_functions(p), std::invalid_argument);
    p = rb(0.0);
    p.cavity_length = 227.3 * 2 * std::numbers::pi / p.cavity_wavevector;
    CHECK_THROWS_AS(mode_functions(p), std::invalid_argument);
}

TEST_CASE("density integrates to N and carries the lambda_p pattern") {
    const auto ph = rb(0.02);
    const auto p = map_to_dicke(ph).with_lambda(12);
    const auto s = superradiant_state(p.with_lambda_prime(0), +1);
    const auto m = mode_functions(ph);
    std::vector<double> x;
    const std::size_t n = 20000;
    for (std::size_t i = 0; i <= n; ++i) x.push_back(m.x_left + m.length() * double(i) / double(n));
    const auto rho = density_profile(ph, s, x);
    double total = 0;
    for (std::size_t i = 0; i <= n; ++i) total += rho[i] * (i == 0 || i == n ? 0.5 : 1.0);
    total *= m.length() / double(n);
    CHECK(std::abs(total / p.atom_number - 1) < 1e-6);

    auto flipped = s;
    flipped.beta = -s.beta;
    const auto rho2 = density_profile(ph, flipped, x);
    // the two branches trade maxima and minima of the pattern
    const std::size_t quarter = n / 2;
    CHECK((rho[quarter] - rho2[quarter]) * (rho[quarter + n / 25] - rho2[quarter + n / 25]) < 0);

    CHECK_THROWS_AS(density_profile(ph, s, std::vector<double>{m.x_left - 1}), std::invalid_argument);
}

}
