#pragma once

#include <vector>

#include "smdpde/types.hpp"

namespace smdpde {

/// Influence function of the marginal mean functional under N(mu, sigma2):
///   -(sigma2)^(beta/2) (1+beta)^(3/2) (2 pi)^(beta/2) (y - mu) f^beta(y).
/// The leading minus is part of the definition used here; its magnitude equals
/// the usual M-estimator influence |y - mu| w(y) scaled by the efficiency
/// constant, so at beta = 0 this is -(y - mu), the negative of the
/// textbook MLE influence.
double if_mean(double y, const MarginalParams& m, TuningBeta beta);

/// Influence function of the marginal variance functional. Reduces to
/// (y - mu)^2 - sigma2 at beta = 0.
double if_variance(double y, const MarginalParams& m, TuningBeta beta);

/// Influence function of the pairwise correlation functional at the
/// contamination point (y1, y2) when the data are N(model). Accounts for
/// the plug-in marginal variances through their influence functions.
double if_correlation(double y1, double y2, const PairParams& model, TuningBeta beta);

enum class InfluenceTarget { mean, variance, correlation };

struct InfluencePoint {
  double y1 = 0.0;
  double y2 = 0.0;
  double value = 0.0;
};

struct InfluenceGrid {
  InfluenceTarget target = InfluenceTarget::correlation;
  /// 1 or 2 for the marginal targets; ignored for correlation.
  int component = 1;
  TuningBeta beta;
  PairParams model;
  std::vector<InfluencePoint> points;
};

/// Evaluates the requested influence function over axis grids. Marginal
/// targets use only `ys` (points carry y in y1 for component 1 and in y2 for
/// component 2); the correlation target uses the full ys x zs product.
InfluenceGrid influence_grid(InfluenceTarget target, int component, const PairParams& model,
                             TuningBeta beta, const std::vector<double>& ys,
                             const std::vector<double>& zs);

}  // namespace smdpde
