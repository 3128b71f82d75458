#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "smdpde/types.hpp"

namespace smdpde {

enum class InitKind { median_mad, mean_var, user };

struct SolverConfig {
  /// Relative parameter change max(|dmu|/(1+|mu|), |ds2|/(1+s2)) that ends iteration.
  double tol = 1e-8;
  std::size_t max_iter = 500;
  InitKind init = InitKind::median_mad;
  /// Starting point when init == InitKind::user.
  MarginalParams user_start{};

  void validate() const;
};

struct MarginalEstimate {
  MarginalParams params;
  std::size_t iterations = 0;
  bool converged = false;
  double final_step_norm = 0.0;
  /// Iterations where a full IRLS step raised the objective and was halved.
  std::size_t halvings = 0;
};

/// Step 1 of the sequential estimator: minimizes the marginal DPD objective
/// for one column by the normal-model IRLS fixed point
///   w_i  = exp(-beta (x_i - mu)^2 / (2 s2))
///   mu  <- sum w_i x_i / sum w_i
///   s2  <- sum w_i (x_i - mu)^2 / (sum w_i - n beta (1+beta)^(-3/2)).
/// At beta = 0 the closed-form MLE (mean, 1/n variance) is returned.
///
/// Throws DegenerateSampleError for constant samples. Hitting max_iter is
/// not an error: the estimate comes back with converged = false.
MarginalEstimate fit_marginal(std::span<const double> x, TuningBeta beta,
                              const SolverConfig& cfg = {});

/// Residuals of the two estimating equations in scale-free form:
///   sum w (x - mu) / (sigma sum w)   and
///   (sum w (x - mu)^2 - s2 (sum w - n beta (1+beta)^(-3/2))) / (s2 sum w).
std::array<double, 2> marginal_estimating_residuals(std::span<const double> x,
                                                    const MarginalParams& p,
                                                    TuningBeta beta);

}  // namespace smdpde
