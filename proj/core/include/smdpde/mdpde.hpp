#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "smdpde/assembly.hpp"
#include "smdpde/marginal.hpp"
#include "smdpde/types.hpp"

namespace smdpde {

/// Why a simultaneous fit stopped.
enum class MdpdeStatus {
  converged,
  /// n <= p: the covariance update cannot be full rank.
  too_few_rows,
  /// sum w - n beta (1+beta)^(-p/2-1) <= 0.
  nonpositive_denominator,
  /// Scatter update lost positive definiteness.
  lost_definiteness,
  max_iterations,
};

std::string to_string(MdpdeStatus s);

struct MdpdeFitResult {
  Eigen::VectorXd mu_hat;
  Eigen::MatrixXd Sigma_hat;
  std::size_t iterations = 0;
  bool converged = false;
  MdpdeStatus status = MdpdeStatus::converged;
  /// fit_mle only: some column has zero variance.
  bool degenerate_columns = false;
};

/// Simultaneous multivariate minimum DPD estimate under N_p(mu, Sigma),
/// computed by the IRLS fixed point
///   w_i   = exp(-(beta/2) (x_i - mu)' Sigma^-1 (x_i - mu))
///   mu    <- sum w_i x_i / sum w_i
///   Sigma <- sum w_i (x_i - mu)(x_i - mu)' / (sum w_i - n beta (1+beta)^(-p/2-1)).
/// Starts from the componentwise median and diag(MAD^2). Failure to
/// converge is reported through `converged`/`status`, never thrown.
MdpdeFitResult fit_mdpde(const DataMatrix& data, TuningBeta beta, const SolverConfig& cfg = {});

/// Sample mean and (1/n) covariance.
MdpdeFitResult fit_mle(const DataMatrix& data);

/// Joint DPD objective for N_p(mu, Sigma):
///   int f^(1+beta) - (1 + 1/beta) mean_i f^beta(x_i),
/// mean negative log-likelihood at beta = 0. Sigma must be PD.
double joint_objective(const DataMatrix& data, const Eigen::VectorXd& mu,
                       const Eigen::MatrixXd& Sigma, TuningBeta beta);

}  // namespace smdpde
