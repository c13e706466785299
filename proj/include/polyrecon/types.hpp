#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace polyrecon {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fan failed validation; operations refuse it.
class InvalidFan : public Error {
 public:
  using Error::Error;
};

/// No maximal cell admits nonnegative coefficients for a query vector.
class NoCarrier : public Error {
 public:
  explicit NoCarrier(const std::string& what, long row = -1) : Error(what), row_(row) {}
  /// Offending sample index when raised while building a design, otherwise -1.
  long row() const { return row_; }

 private:
  long row_;
};

/// The dependence solve of a wall is rank-deficient (numerically collinear rays).
class DegenerateWall : public Error {
 public:
  using Error::Error;
};

/// A support vector is outside the deformation cone.
class NotInDeformationCone : public Error {
 public:
  using Error::Error;
};

/// The inequality system {<v_i, x> <= h_i} is empty.
class EmptyPolytope : public Error {
 public:
  using Error::Error;
};

/// Inputs with inconsistent sizes or otherwise malformed values.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Per-ray quotas of a sampling plan cannot be met within m samples.
class QuotaInfeasible : public Error {
 public:
  using Error::Error;
};

/// The convergence-bound parameter lambda is not positive.
class NonpositiveLambda : public Error {
 public:
  using Error::Error;
};

/// A dataset does not meet the per-ray concentration counts of a plan.
class HypothesisUnmet : public Error {
 public:
  using Error::Error;
};

}  // namespace polyrecon
