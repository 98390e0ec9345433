// errors.hpp: exception types shared by the numerical modules

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dicke {

// Anything that went wrong inside a numerical routine (as opposed to bad input).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Adaptive integrator could not keep the step size above its floor.
class StiffnessError : public NumericError {
public:
    StiffnessError(const std::string& what, double t, double h, std::vector<double> state)
        : NumericError(what), time_(t), step_(h), state_(std::move(state)) {}

    double time() const noexcept { return time_; }
    double step() const noexcept { return step_; }
    const std::vector<double>& state() const noexcept { return state_; }

private:
    double time_;
    double step_;
    std::vector<double> state_;
};

// Newton iteration failed; carries the coupling at which it happened.
class ConvergenceError : public NumericError {
public:
    ConvergenceError(const std::string& what, double lambda)
        : NumericError(what), lambda_(lambda) {}
    double lambda() const noexcept { return lambda_; }

private:
    double lambda_;
};

// Linear-response quantities diverge at the critical coupling.
class ThresholdError : public NumericError {
public:
    ThresholdError(const std::string& what, double lambda_over_critical)
        : NumericError(what), ratio_(lambda_over_critical) {}
    double lambda_over_critical() const noexcept { return ratio_; }

private:
    double ratio_;
};

} // namespace dicke
