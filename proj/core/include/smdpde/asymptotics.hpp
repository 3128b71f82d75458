#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smdpde/types.hpp"

namespace smdpde {

enum class Method { smdpde, mdpde };

/// Asymptotic covariance pieces for (sigma2_1, sigma2_2, rho) of a
/// bivariate normal with zero means.
struct AsymVarReport {
  Method method = Method::smdpde;
  /// Hessian-type matrix: B for the sequential estimator, J for the joint one.
  Eigen::Matrix3d bread;
  /// Score covariance: Gamma0 (sequential) or K (joint).
  Eigen::Matrix3d meat;
  double var_sigma2_1 = 0.0;
  double var_sigma2_2 = 0.0;
  double var_rho = 0.0;
  /// Asymptotic variance of sqrt(n) mu_hat_1.
  double var_mean = 0.0;
  /// 2-norm condition number of the bread matrix.
  double condition = 0.0;
};

/// (1 + beta^2 / (1 + 2 beta))^(3/2) sigma2.
double smdpde_mean_avar(TuningBeta beta, double sigma2);
/// (1 + beta^2 / (1 + 2 beta))^2 sigma2.
double mdpde_mean_avar(TuningBeta beta, double sigma2);

/// Sandwich B^-1 Gamma0 B^-T for the sequential estimator. Throws
/// NumericError (carrying the condition number) if B is numerically singular.
AsymVarReport smdpde_block_avar(TuningBeta beta, double sigma1, double sigma2, double rho);

/// Sandwich J^-1 K J^-1 for the simultaneous estimator.
AsymVarReport mdpde_block_avar(TuningBeta beta, double sigma1, double sigma2, double rho);

/// Efficiencies (percent) relative to the MLE at unit variances.
struct AreRow {
  double beta = 0.0;
  double mean_smdpde = 0.0;
  double mean_mdpde = 0.0;
  double variance_smdpde = 0.0;
  double variance_mdpde = 0.0;
};

struct AreCell {
  double rho = 0.0;
  double beta = 0.0;
  double smdpde = 0.0;
  double mdpde = 0.0;
};

struct AreTables {
  std::vector<double> betas;
  std::vector<double> rhos;
  /// One row per beta: component mean and variance efficiencies.
  std::vector<AreRow> marginal;
  /// rhos.size() x betas.size() cells, row-major by rho.
  std::vector<AreCell> correlation;

  const AreCell& cell(std::size_t rho_index, std::size_t beta_index) const {
    return correlation[rho_index * betas.size() + beta_index];
  }
};

/// Efficiency tables over the given grids. Throws ValidationError for an
/// empty grid, beta outside [0,1], or |rho| >= 1.
AreTables are_tables(const std::vector<double>& betas, const std::vector<double>& rhos);

/// Mean/variance table: rows "Mean"/"Variance" x "SMDPDE"/"MDPDE", one
/// column per beta.
std::string marginal_are_csv(const AreTables& t);

/// Correlation table: one row per rho, each beta column holds
/// "smdpde(mdpde)".
std::string correlation_are_csv(const AreTables& t);

std::string to_string(Method m);

}  // namespace smdpde
