#pragma once

#include <stdexcept>
#include <string>

namespace composite {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Root finder called with endpoints of equal sign.
class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative method ran out of its refinement budget.
class NonConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An equation the caller asked us to solve has no root in the admissible range.
class NoSolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Simulation request exceeds the desk-scale codebook cap.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

[[noreturn]] inline void domain_fail(const std::string& where, const std::string& what) {
    throw DomainError(where + ": " + what);
}

}  // namespace detail
}  // namespace composite
