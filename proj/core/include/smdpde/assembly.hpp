#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "smdpde/correlation.hpp"
#include "smdpde/marginal.hpp"
#include "smdpde/nearest_pd.hpp"
#include "smdpde/types.hpp"

namespace smdpde {

/// n x p sample stored column-major, so each component is a contiguous span.
class DataMatrix {
 public:
  /// Throws ValidationError for n < 2, p < 1 or non-finite entries.
  explicit DataMatrix(Eigen::MatrixXd values);

  std::size_t n() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(values_.cols()); }

  std::span<const double> column(std::size_t j) const {
    return {values_.col(static_cast<Eigen::Index>(j)).data(), n()};
  }

  const Eigen::MatrixXd& values() const { return values_; }

 private:
  Eigen::MatrixXd values_;
};

enum class PdPolicy { automatic, always, never };

struct EstimateOptions {
  SolverConfig solver{};
  CorrelationConfig correlation{};
  PdPolicy pd_policy = PdPolicy::automatic;
  NearestPdConfig pd{};
  /// Worker cap for the per-marginal and per-pair tasks; 0 = default.
  int threads = 0;
};

struct PairEstimate {
  std::size_t j = 0;
  std::size_t k = 0;
  CorrelationEstimate fit;
};

struct LocationScatterEstimate {
  Eigen::VectorXd mu_hat;
  Eigen::VectorXd sigma2_hat;
  /// Reported correlation matrix (after PD repair when pd_corrected).
  Eigen::MatrixXd R_hat;
  /// sigma_j sigma_k R_hat(j, k).
  Eigen::MatrixXd Sigma_hat;
  bool pd_corrected = false;
  std::vector<MarginalEstimate> per_component;
  /// Raw Step-2 fits in (0,1), (0,2), ..., (p-2,p-1) order.
  std::vector<PairEstimate> per_pair;

  std::size_t p() const { return static_cast<std::size_t>(mu_hat.size()); }

  /// Number of free parameters, (p^2 + 3p) / 2.
  std::size_t parameter_count() const { return (p() * p() + 3 * p()) / 2; }

  /// Every marginal and every correlation fit converged.
  bool converged() const;
};

/// Sequential minimum DPD estimate of location and scatter.
///
/// Step 1 fits each column's (mu, sigma2); Step 2 fits each pair's rho with
/// the Step-1 marginals plugged in. Both steps run as independent tasks and
/// the result does not depend on the worker count.
///
/// Throws DegenerateSampleError (naming the column) for a constant column.
LocationScatterEstimate estimate(const DataMatrix& data, TuningBeta beta,
                                 const EstimateOptions& options = {});

/// Sigma(j, k) = sqrt(s2_j s2_k) R(j, k).
Eigen::MatrixXd assemble_covariance(const Eigen::VectorXd& sigma2, const Eigen::MatrixXd& R);

}  // namespace smdpde
