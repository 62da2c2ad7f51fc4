#pragma once

#include <stdexcept>
#include <string>

namespace rumorsis {

/// A model parameter, allocation or configuration value lies outside its domain.
class ParamError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The fixed-point solver failed to converge. Carries the last bracket.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double lo, double hi)
        : std::runtime_error(what), lo_(lo), hi_(hi) {}

    double bracket_lo() const noexcept { return lo_; }
    double bracket_hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

/// The ODE integrator left the unit box even after repeated step halving.
class IntegratorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rumorsis
