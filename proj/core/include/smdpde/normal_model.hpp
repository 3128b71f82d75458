#pragma once

// Closed-form normal-model quantities used by the DPD objectives.
//
// All functions are pure. Density powers are formed in log space so that
// f^beta of far outliers underflows to zero instead of producing inf * 0.

#include <array>
#include <span>

#include "smdpde/types.hpp"

namespace smdpde {

/// Integral of f^(1+beta) for N(mu, sigma2): (2 pi sigma2)^(-beta/2) (1+beta)^(-1/2).
double univariate_power_integral(const MarginalParams& p, TuningBeta beta);

/// Integral of f^(1+beta) for the bivariate normal:
/// (2 pi)^(-beta) (s1^2 s2^2 (1 - rho^2))^(-beta/2) / (1 + beta).
double bivariate_power_integral(const PairParams& p, TuningBeta beta);

/// log N(x; mu, sigma2).
double log_density(double x, const MarginalParams& p);

/// Bivariate normal log density.
double log_density(double x1, double x2, const PairParams& p);

/// Marginal DPD objective
///   H(theta) = int f^(1+beta) - (1 + 1/beta) mean_i f^beta(x_i).
/// At beta = 0 this returns the mean negative log-likelihood, which has
/// the same minimizer as the beta -> 0 limit.
double marginal_objective(std::span<const double> x, const MarginalParams& p,
                          TuningBeta beta);

/// Gradient of marginal_objective with respect to (mu, sigma2).
std::array<double, 2> marginal_objective_gradient(std::span<const double> x,
                                                  const MarginalParams& p,
                                                  TuningBeta beta);

/// Bivariate DPD objective with both marginals and rho free. Requires
/// |rho| <= 1 - kRhoGuard.
double pairwise_objective(std::span<const double> xj,
                          std::span<const double> xk, const PairParams& p,
                          TuningBeta beta);

/// Gradient of pairwise_objective ordered as (mu_a, sigma2_a, mu_b, sigma2_b, rho).
std::array<double, 5> pairwise_objective_gradient(std::span<const double> xj,
                                                  std::span<const double> xk,
                                                  const PairParams& p,
                                                  TuningBeta beta);

/// Scores d log f / d(mu_a, sigma2_a, mu_b, sigma2_b, rho) of the bivariate
/// normal at one point.
std::array<double, 5> bivariate_scores(double x1, double x2, const PairParams& p);

}  // namespace smdpde
