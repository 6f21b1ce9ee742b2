#pragma once

#include <stdexcept>
#include <string>

namespace uavnet {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Arrival rate too high for any threshold to keep the queue stable.
class InfeasibleTrafficError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A numerical procedure failed to reach its tolerance. Carries the best estimate found.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double best_estimate)
        : std::runtime_error(what), best_estimate_(best_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }

private:
    double best_estimate_;
};

/// Bad scenario or user input. `line` is the 1-based source line, 0 when unknown.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what, int line = 0)
        : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace uavnet
