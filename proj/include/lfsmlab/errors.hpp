#pragma once

#include <stdexcept>
#include <string>

namespace lfsmlab {

/// Parameter outside its mathematical domain.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An estimator could not produce a meaningful value from the data it was given.
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Workspace request too large to satisfy.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Requested key (alpha, figure id, ...) absent from a result set.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Numerical quadrature failed to reach its tolerance.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved error " + std::to_string(achieved) + ")"),
          achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// Malformed input file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lfsmlab
