// errors.hpp: Exception types shared by all dephasing modules

#pragma once

#include <stdexcept>
#include <string>

namespace dephasing {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (ω < 0, x ≤ 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// The requested integral does not converge (e.g. J_eff/ω² not integrable at 0).
class DivergenceError : public Error {
public:
    using Error::Error;
};

// Operation requested for a bath whose regime does not define the quantity.
class RegimeError : public Error {
public:
    using Error::Error;
};

// Caller-side contract violated (grid too short, too few samples, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Malformed configuration or input file (unknown key, wrong type, bad CSV).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Quadrature gave up before reaching the requested tolerance.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double estimate, double error_estimate)
        : Error(what), estimate_(estimate), error_estimate_(error_estimate) {}

    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

}  // namespace dephasing
