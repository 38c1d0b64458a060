#pragma once

#include <stdexcept>
#include <string>

namespace vfplan {

/// A lattice sum failed to converge within the configured radius.
/// Carries the last partial sum so callers can inspect how far it got.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& msg, double partial_sum)
        : std::runtime_error(msg), partial_sum_(partial_sum) {}
    double partial_sum() const noexcept { return partial_sum_; }

private:
    double partial_sum_;
};

/// Adaptive quadrature stopped before reaching the requested tolerance.
/// Carries the tolerance that was actually achieved.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& msg, double achieved_tol)
        : std::runtime_error(msg), achieved_tol_(achieved_tol) {}
    double achieved_tolerance() const noexcept { return achieved_tol_; }

private:
    double achieved_tol_;
};

/// Gram matrix could not be factorized even after nugget escalation.
class ConditioningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested dimension is outside the supported range for this operation.
class UnsupportedDimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace vfplan
