#pragma once

#include <stdexcept>
#include <string>

namespace selfsim {

// Raised when an argument, parameter set or sample point lies outside the
// region where a function or operator is defined.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Raised when a series evaluation exhausts its term budget and the caller
// needs a scalar rather than an EvalResult.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace selfsim
