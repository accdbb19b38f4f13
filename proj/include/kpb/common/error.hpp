#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kpb {

/// Raised when a formula is evaluated outside its domain (e.g. a symbol at xi = 0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when two fields that must share a grid do not.
class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a dyadic level or other discrete parameter is outside its admissible range.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Raised when a computation produces non-finite values or runaway growth.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(std::size_t step, const std::string& what)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace kpb
