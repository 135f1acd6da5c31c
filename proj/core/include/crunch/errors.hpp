#pragma once

#include <stdexcept>
#include <string>

namespace crunch {

/// A caller broke a documented precondition (wrong dimension, bad sd, ...).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An input lies outside the mathematical domain of an operation (non-finite coordinates).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The operation is only defined for a subset of objective kinds.
class UnsupportedObjective : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid configuration: rejected before any objective evaluation happens.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace crunch
