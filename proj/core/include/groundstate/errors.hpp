#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace groundstate {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad grid/flow/shooting parameters (non-positive radius, too few nodes, ...).
class InvalidConfiguration : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a formula (d < 3 for w*, sigma >= sigma*, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Profiles/operators living on different grids or with inconsistent sizes.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

/// Iteration cap reached. Carries the full per-iteration residual history.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, std::vector<double> residuals)
        : Error(what), residual_history_(std::move(residuals)) {}

    const std::vector<double>& residual_history() const noexcept { return residual_history_; }

private:
    std::vector<double> residual_history_;
};

/// An iterate lost positivity or collapsed to zero.
class DegenerateIterate : public Error {
public:
    using Error::Error;
};

class RootNotFound : public Error {
public:
    using Error::Error;
};

class NoBracket : public Error {
public:
    using Error::Error;
};

class SpectralFailure : public Error {
public:
    SpectralFailure(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class ConditioningError : public Error {
public:
    using Error::Error;
};

class IntegrationError : public Error {
public:
    using Error::Error;
};

}  // namespace groundstate
