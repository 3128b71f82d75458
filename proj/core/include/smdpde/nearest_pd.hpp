#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "smdpde/errors.hpp"

namespace smdpde {

inline constexpr double kDefaultEigenFloor = 1e-8;

struct NearestPdConfig {
  double eigen_floor = kDefaultEigenFloor;
  std::size_t max_sweeps = 200;
  /// Frobenius change between sweeps that ends the projection loop.
  double tolerance = 1e-10;
};

/// Repairs an indefinite correlation matrix.
///
/// Alternating projections (with Dykstra's correction on the PSD step)
/// between the PSD cone and the set of unit-diagonal symmetric matrices
/// give the nearest correlation matrix in Frobenius norm. Eigenvalues are
/// then floored at eigen_floor and the diagonal rescaled back to one.
///
/// Inputs whose smallest eigenvalue already reaches eigen_floor are
/// returned unchanged. Throws ValidationError unless R is square, symmetric
/// and has unit diagonal to within 1e-12.
Eigen::MatrixXd nearest_pd(const Eigen::MatrixXd& R, const NearestPdConfig& cfg = {});

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Eigen::MatrixXd& S);

}  // namespace smdpde
