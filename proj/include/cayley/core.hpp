#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace cayley {

/// Dense real matrix. Storage is column-major (Eigen default) throughout.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of the operands do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input matrix is numerically rank deficient.
class RankError : public Error {
 public:
  using Error::Error;
};

/// A dense factorization failed to converge.
class FactorizationError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be invertible (e.g. the Schur complement M) is not.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, double rcond)
      : Error(what), rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

/// The point lies on (or numerically too close to) the singular-point set
/// E_{N,p}(S) of the transform centered at S.
class SingularPointError : public Error {
 public:
  SingularPointError(const std::string& what, double det)
      : Error(what), det_(det) {}
  double det() const { return det_; }

 private:
  double det_;
};

/// Caller violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The low-rank inner solve of the Cayley retraction broke down. Line searches
/// treat this as "step too large" and shrink the step.
class StepTooLargeError : public Error {
 public:
  using Error::Error;
};

/// Backtracking exhausted its budget of step reductions.
class LineSearchStalled : public Error {
 public:
  LineSearchStalled(const std::string& what, double last_gamma)
      : Error(what), last_gamma_(last_gamma) {}
  double last_gamma() const { return last_gamma_; }

 private:
  double last_gamma_;
};

}  // namespace cayley
