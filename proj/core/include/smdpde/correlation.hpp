#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smdpde/types.hpp"

namespace smdpde {

struct CorrelationConfig {
  /// Absolute tolerance on rho for the Brent refinement.
  double tol = 1e-8;
  /// Equispaced seeds over [-1 + guard, 1 - guard] scanned before refinement.
  std::size_t seeds = 41;
};

struct CorrelationEstimate {
  double rho = 0.0;
  double objective_at_min = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
  /// Minimizer sits on the +/-(1 - kRhoGuard) guard.
  bool at_boundary = false;
};

/// Step 2 of the sequential estimator: minimizes rho -> H_jk(m_j, m_k, rho)
/// with the Step-1 marginals held fixed. A seed scan locates the best
/// bracket, then Brent refines inside it.
CorrelationEstimate fit_correlation(std::span<const double> xj,
                                    std::span<const double> xk,
                                    const MarginalParams& mj,
                                    const MarginalParams& mk, TuningBeta beta,
                                    const CorrelationConfig& cfg = {});

/// Pairwise objective as a function of rho only, with the standardized
/// residuals precomputed. Cheap to evaluate repeatedly.
class CorrelationObjective {
 public:
  CorrelationObjective(std::span<const double> xj, std::span<const double> xk,
                       const MarginalParams& mj, const MarginalParams& mk,
                       TuningBeta beta);

  double operator()(double rho) const;

 private:
  std::vector<double> sum_sq_;  // z1^2 + z2^2
  std::vector<double> cross_;   // z1 z2
  double mean_sum_sq_ = 0.0;
  double mean_cross_ = 0.0;
  double log_var_prod_ = 0.0;
  TuningBeta beta_;
};

}  // namespace smdpde
