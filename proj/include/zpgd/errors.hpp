#pragma once

#include <stdexcept>
#include <string>

namespace zpgd {

/// Argument outside the mathematical domain of an operation (t <= 0, Y at x <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Numerical procedure failed to reach its target (step underflow, missing bracket, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Problem data inconsistent with what an operation needs.
class DataError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Scenario file that cannot be parsed or has the wrong shape.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace zpgd
