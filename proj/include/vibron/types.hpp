// types.hpp — shared aliases and the error hierarchy
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace vibron {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Input/validation problems map to CLI exit code 1, numerical failures to 2.
struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : ValidationFailure {
    using ValidationFailure::ValidationFailure;
};

struct UnitError : ValidationFailure {
    using ValidationFailure::ValidationFailure;
};

struct ValidationError : ValidationFailure {
    using ValidationFailure::ValidationFailure;
};

struct ParseError : ValidationFailure {
    int line{0};
    int column{0};
    ParseError(const std::string& msg, int line_, int column_)
        : ValidationFailure(msg), line(line_), column(column_) {}
};

struct SingularDuschinsky : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

struct PoleError : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

struct DomainError : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

struct CutoffExceeded : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

struct NonConvergence : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

struct InvariantViolation : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

} // namespace vibron
