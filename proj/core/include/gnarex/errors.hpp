#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gnarex {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument: bad index, mismatched shapes, malformed configuration.
class ArgumentError : public Error {
public:
    using Error::Error;
};

// Value outside the admissible range (too few observations, t <= L, ...).
class RangeError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent input data (non-positive levels, gaps, bad CSV).
class DataError : public Error {
public:
    using Error::Error;
};

// Iterative numerical procedure failed (eigensolver, Gauss-Newton).
class NumericError : public Error {
public:
    using Error::Error;
};

// Simulation refused because the implied VAR is not stationary.
class StationarityError : public NumericError {
public:
    StationarityError(const std::string& what, double radius)
        : NumericError(what), radius_(radius) {}
    [[nodiscard]] double radius() const noexcept { return radius_; }

private:
    double radius_;
};

// Least-squares design matrix is rank deficient.
class SingularityError : public NumericError {
public:
    SingularityError(const std::string& what, std::vector<std::string> columns)
        : NumericError(what), columns_(std::move(columns)) {}
    [[nodiscard]] const std::vector<std::string>& columns() const noexcept { return columns_; }

private:
    std::vector<std::string> columns_;
};

}  // namespace gnarex
