// types.hpp: parameter and state types of the open Dicke model

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace dicke {

// Open Dicke model. Frequencies are in units of the recoil frequency, so
// omega0 == 1 for anything produced by map_to_dicke, but nothing assumes it.
template <typename Scalar>
struct DickeParams {
    Scalar omega{300};         // cavity frequency in the pump frame
    Scalar omega0{1};          // recoil frequency
    Scalar lambda{0};          // collective coupling
    Scalar lambda_prime{0};    // symmetry-breaking field
    Scalar kappa{200};         // cavity field decay rate
    Scalar atom_number{1e6};

    DickeParams with_lambda(Scalar l) const {
        DickeParams p = *this;
        p.lambda = l;
        return p;
    }
    DickeParams with_lambda_prime(Scalar lp) const {
        DickeParams p = *this;
        p.lambda_prime = lp;
        return p;
    }
};

using DickeParamsd = DickeParams<double>;

template <typename Scalar>
void validate(const DickeParams<Scalar>& p) {
    auto bad = [](const std::string& what) { throw std::invalid_argument("DickeParams: " + what); };
    if (!(p.omega > 0)) bad("omega must be positive");
    if (!(p.omega0 > 0)) bad("omega0 must be positive");
    if (!(p.kappa >= 0)) bad("kappa must be non-negative");
    if (!(p.lambda >= 0)) bad("lambda must be non-negative");
    if (!std::isfinite(static_cast<double>(p.lambda_prime))) bad("lambda_prime must be finite");
    if (!(p.atom_number >= 1)) bad("atom_number must be at least 1");
}

// Semiclassical state: alpha = <a>, beta = <J->, w = <Jz>.
template <typename Scalar>
struct MeanFieldState {
    using Complex = std::complex<Scalar>;
    using Vector = Eigen::Matrix<Scalar, 5, 1>;

    Complex alpha{0};
    Complex beta{0};
    Scalar w{0};

    // |beta|^2 + w^2, conserved by the closed dynamics (N^2/4 on the physical sphere)
    Scalar pseudo_spin_length2() const { return std::norm(beta) + w * w; }

    Vector to_vector() const {
        Vector v;
        v << alpha.real(), alpha.imag(), beta.real(), beta.imag(), w;
        return v;
    }
    static MeanFieldState from_vector(const Vector& v) {
        return {Complex(v[0], v[1]), Complex(v[2], v[3]), v[4]};
    }

    // Normal-phase ground state, everything in the condensate mode.
    static MeanFieldState normal(Scalar atom_number) { return {Complex(0), Complex(0), -atom_number / 2}; }
};

using MeanFieldStated = MeanFieldState<double>;

// Image under the Z2 parity (a, J-) -> (-a, -J-) of the lambda' = 0 model.
template <typename Scalar>
MeanFieldState<Scalar> parity_image(const MeanFieldState<Scalar>& s) {
    return {-s.alpha, -s.beta, s.w};
}

} // namespace dicke
