#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sigmak {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

// Iterative method failed to converge or produced non-finite values.
struct NumericError : Error {
  using Error::Error;
};

// Object used before required setup (e.g. uncalibrated cutoff).
struct StateError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct InfeasibleError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct CalibrationError : Error {
  using Error::Error;
};

// Gradient too close to lightlike for a stable curvature evaluation.
struct ConditioningError : Error {
  using Error::Error;
};

// Hessian-quotient argument left the admissible cone.
struct OutsideConeError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

constexpr double kPi = 3.14159265358979323846;

double binom(int n, int k);

Vec unit_vector(int n, int i);

// Orthonormal basis (columns) of the tangent space y^perp at a unit vector y.
Mat tangent_basis(const Vec& y);

}  // namespace sigmak
