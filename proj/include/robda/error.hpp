#ifndef ROBDA_ERROR_HPP
#define ROBDA_ERROR_HPP

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace robda {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user-facing configuration: unknown column, invalid parameter, inconsistent flags.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input data violates a dataset invariant (unparseable cell, empty class, ...).
class DataError : public Error {
public:
    using Error::Error;
};

/// Vector/matrix dimensions do not agree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A covariance matrix is singular or too ill-conditioned to be used.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Rendering was asked for something the plot type cannot show.
class PlotError : public Error {
public:
    using Error::Error;
};

/// The MCD objective reached (numerically) zero: at least h cases lie on the
/// hyperplane { x : normal . x = offset }.
class ExactFitError : public DegenerateError {
public:
    ExactFitError(const std::string& what, Eigen::VectorXd normal, double offset)
        : DegenerateError(what), normal_(std::move(normal)), offset_(offset) {}

    const Eigen::VectorXd& normal() const noexcept { return normal_; }
    double offset() const noexcept { return offset_; }

private:
    Eigen::VectorXd normal_;
    double offset_;
};

} // namespace robda

#endif // ROBDA_ERROR_HPP
