#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smdpde/assembly.hpp"
#include "smdpde/marginal.hpp"

namespace smdpde {

/// Sub-seed for replication r: splitmix64(seed + (r + 1) * 0x9E3779B97F4A7C15).
/// Each replication owns an independent engine, so results do not depend on
/// which worker runs which replication.
std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t replication);

/// p x p matrix with the Toeplitz block rho^|i-j| in the leading
/// floor(p/2) x floor(p/2) corner and the identity elsewhere. For p = 2 the
/// block would be 1 x 1, so the full 2 x 2 matrix [[1, rho], [rho, 1]] is
/// returned instead.
Eigen::MatrixXd gen_block_banded(std::size_t p, double rho);

/// n draws from N_p(mu, Sigma) via the Cholesky factor; deterministic in seed.
DataMatrix sample_mvn(std::size_t n, const Eigen::VectorXd& mu, const Eigen::MatrixXd& Sigma,
                      std::uint64_t seed);

struct ContaminatedSample {
  DataMatrix data;
  /// Row i was drawn from the contaminating component.
  std::vector<bool> contaminated;
};

/// Each row independently from N(0, Sigma) with probability 1 - eps, else
/// from N(shift * 1, I).
ContaminatedSample contaminate_casewise(std::size_t n, std::size_t p, double eps, double shift,
                                        const Eigen::MatrixXd& Sigma, std::uint64_t seed);

struct CellwiseDesign {
  std::size_t p = 4;
  std::size_t clean_count = 600;
  std::size_t per_axis_count = 100;
  double shift = 5.0;
};

/// clean_count rows from N(0, Sigma), then for each axis i a block of
/// per_axis_count rows from N(shift e_i, I). Sigma defaults to the identity.
ContaminatedSample contaminate_cellwise(std::uint64_t seed, const CellwiseDesign& design = {},
                                        const Eigen::MatrixXd& Sigma = {});

struct LocationScatter {
  Eigen::VectorXd mu;
  Eigen::MatrixXd Sigma;
};

struct Metrics {
  double bias_location = 0.0;
  double mse_location = 0.0;
  double bias_scatter = 0.0;
  double mse_scatter = 0.0;
};

/// bias = ||mean(estimates) - truth||, mse = mean ||estimate - truth||^2,
/// Euclidean for location and Frobenius for scatter.
Metrics bias_mse(const std::vector<LocationScatter>& estimates, const LocationScatter& truth);

enum class MethodKind { mle, smdpde, mdpde };

struct MethodSpec {
  MethodKind kind = MethodKind::mle;
  double beta = 0.0;

  std::string name() const;
};

enum class SigmaKind { identity, block_banded, custom };
enum class ContaminationKind { none, casewise, cellwise };

struct ScenarioConfig {
  std::size_t n = 1000;
  std::size_t p = 2;
  SigmaKind sigma_kind = SigmaKind::identity;
  double banded_rho = 0.7;
  Eigen::MatrixXd custom_sigma;
  ContaminationKind contamination = ContaminationKind::none;
  double eps = 0.1;
  double shift = 20.0;
  std::size_t clean_count = 600;
  std::size_t per_axis_count = 100;
  std::size_t replications = 20;
  std::uint64_t seed = 0;
  std::vector<MethodSpec> methods;
  SolverConfig solver{};
  int threads = 0;

  /// Throws ValidationError naming the offending field.
  void validate() const;
  /// Population covariance of the clean component.
  Eigen::MatrixXd sigma() const;
  /// Rows per replication (clean_count + p * per_axis_count when cellwise).
  std::size_t rows() const;
};

struct MethodReport {
  MethodSpec method;
  /// NaN when no replication converged.
  Metrics metrics;
  std::size_t converged = 0;
  std::size_t failed = 0;
  double convergence_rate = 0.0;
  /// SMDPDE only: replications whose correlation matrix needed PD repair.
  std::size_t pd_corrected = 0;
};

struct SimReport {
  ScenarioConfig config;
  std::vector<MethodReport> methods;
  double wall_seconds = 0.0;
};

/// Runs every replication (in parallel), fits every method, and aggregates
/// metrics over the replications where the method converged.
SimReport run_scenario(const ScenarioConfig& cfg);

}  // namespace smdpde
