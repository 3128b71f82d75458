#include "smdpde/nearest_pd.hpp"

#include <cmath>

#include "smdpde/errors.hpp"

namespace smdpde {

namespace {

constexpr double kStructureTol = 1e-12;
constexpr int kMaxFloorRounds = 50;

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd X = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (X + X.transpose());
}

void validate_correlation_shape(const Eigen::MatrixXd& R) {
  if (R.rows() != R.cols()) throw ValidationError("nearest_pd: matrix must be square");
  if (!R.allFinite()) throw ValidationError("nearest_pd: matrix has non-finite entries");
  for (Eigen::Index i = 0; i < R.rows(); ++i) {
    if (std::abs(R(i, i) - 1.0) > kStructureTol) {
      throw ValidationError("nearest_pd: diagonal entry " + std::to_string(i) + " is not 1");
    }
    for (Eigen::Index j = i + 1; j < R.cols(); ++j) {
      if (std::abs(R(i, j) - R(j, i)) > kStructureTol) {
        throw ValidationError("nearest_pd: matrix is not symmetric at (" + std::to_string(i) +
                              "," + std::to_string(j) + ")");
      }
    }
  }
}

}  // namespace

double min_eigenvalue(const Eigen::MatrixXd& S) {
  if (S.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Eigen::MatrixXd nearest_pd(const Eigen::MatrixXd& R, const NearestPdConfig& cfg) {
  validate_correlation_shape(R);
  if (!(cfg.eigen_floor > 0.0)) throw ValidationError("nearest_pd: eigen_floor must be positive");
  if (min_eigenvalue(R) >= cfg.eigen_floor) return R;

  const Eigen::Index p = R.rows();
  Eigen::MatrixXd Y = 0.5 * (R + R.transpose());
  Eigen::MatrixXd dykstra = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    const Eigen::MatrixXd shifted = Y - dykstra;
    const Eigen::MatrixXd X = project_psd(shifted);
    dykstra = X - shifted;
    Eigen::MatrixXd next = X;
    next.diagonal().setOnes();
    const double change = (next - Y).norm();
    Y = std::move(next);
    if (change <= cfg.tolerance) break;
  }

  // Flooring then rescaling the diagonal perturbs the spectrum by O(floor),
  // so repeat until the floor holds after rescaling.
  const double accept = cfg.eigen_floor * (1.0 - 1e-6);
  for (int round = 0; round < kMaxFloorRounds; ++round) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Y);
    const Eigen::VectorXd floored = es.eigenvalues().cwiseMax(cfg.eigen_floor);
    Eigen::MatrixXd X = es.eigenvectors() * floored.asDiagonal() * es.eigenvectors().transpose();
    const Eigen::VectorXd scale = X.diagonal().cwiseSqrt().cwiseInverse();
    X = scale.asDiagonal() * X * scale.asDiagonal();
    X = (0.5 * (X + X.transpose())).eval();
    X.diagonal().setOnes();
    Y = std::move(X);
    if (min_eigenvalue(Y) >= accept) break;
  }
  return Y;
}

}  // namespace smdpde
