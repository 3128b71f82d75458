#include "smdpde/correlation.hpp"

#include <cmath>

#include "smdpde/brent.hpp"
#include "smdpde/normal_model.hpp"

namespace smdpde {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

CorrelationObjective::CorrelationObjective(std::span<const double> xj,
                                           std::span<const double> xk,
                                           const MarginalParams& mj,
                                           const MarginalParams& mk,
                                           TuningBeta beta)
    : beta_(beta) {
  if (xj.size() != xk.size()) {
    throw ValidationError("paired samples differ in length: " +
                          std::to_string(xj.size()) + " vs " +
                          std::to_string(xk.size()));
  }
  if (xj.empty()) throw ValidationError("correlation objective needs observations");
  require_positive_variance(mj.sigma2);
  require_positive_variance(mk.sigma2);
  const double sj = mj.sigma();
  const double sk = mk.sigma();
  sum_sq_.resize(xj.size());
  cross_.resize(xj.size());
  for (std::size_t i = 0; i < xj.size(); ++i) {
    const double z1 = (xj[i] - mj.mu) / sj;
    const double z2 = (xk[i] - mk.mu) / sk;
    sum_sq_[i] = z1 * z1 + z2 * z2;
    cross_[i] = z1 * z2;
    mean_sum_sq_ += sum_sq_[i];
    mean_cross_ += cross_[i];
  }
  const double n = static_cast<double>(xj.size());
  mean_sum_sq_ /= n;
  mean_cross_ /= n;
  log_var_prod_ = std::log(mj.sigma2) + std::log(mk.sigma2);
}

double CorrelationObjective::operator()(double rho) const {
  const double one_m = 1.0 - rho * rho;
  const double log_det = log_var_prod_ + std::log1p(-rho * rho);
  if (beta_.is_mle()) {
    return kLog2Pi + 0.5 * log_det +
           (mean_sum_sq_ - 2.0 * rho * mean_cross_) / (2.0 * one_m);
  }
  const double b = beta_.value();
  const double log_norm = -kLog2Pi - 0.5 * log_det;
  double s = 0.0;
  for (std::size_t i = 0; i < sum_sq_.size(); ++i) {
    const double log_f = log_norm - (sum_sq_[i] - 2.0 * rho * cross_[i]) / (2.0 * one_m);
    s += std::exp(b * log_f);
  }
  const double integral = std::exp(-b * kLog2Pi - 0.5 * b * log_det) / (1.0 + b);
  return integral - (1.0 + 1.0 / b) * s / static_cast<double>(sum_sq_.size());
}

CorrelationEstimate fit_correlation(std::span<const double> xj,
                                    std::span<const double> xk,
                                    const MarginalParams& mj,
                                    const MarginalParams& mk, TuningBeta beta,
                                    const CorrelationConfig& cfg) {
  if (xj.size() != xk.size()) {
    throw ValidationError("paired samples differ in length: " +
                          std::to_string(xj.size()) + " vs " +
                          std::to_string(xk.size()));
  }
  if (xj.size() < 3) throw ValidationError("correlation fit needs at least three observations");
  if (cfg.seeds < 3) throw ValidationError("correlation scan needs at least three seeds");
  if (!(cfg.tol > 0.0)) throw ValidationError("correlation tolerance must be positive");

  const CorrelationObjective objective(xj, xk, mj, mk, beta);
  const double edge = 1.0 - kRhoGuard;
  const std::size_t m = cfg.seeds;

  // Seeds are built as edge * (2i/(m-1) - 1) so the grid is exactly symmetric.
  std::vector<double> seeds(m);
  std::vector<double> values(m);
  std::size_t best = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double u = static_cast<double>(2 * static_cast<long>(i) - static_cast<long>(m - 1)) /
                     static_cast<double>(m - 1);
    seeds[i] = edge * u;
    values[i] = objective(seeds[i]);
    if (values[i] < values[best]) best = i;
  }

  CorrelationEstimate out;
  out.evaluations = m;
  const std::size_t left = best == 0 ? 0 : best - 1;
  const std::size_t right = best + 1 == m ? m - 1 : best + 1;
  const BrentResult refined =
      brent_minimize(objective, seeds[left], seeds[right], cfg.tol);
  out.evaluations += refined.evaluations;
  out.converged = refined.converged;

  const bool edge_seed = best == 0 || best + 1 == m;
  if (refined.fx < values[best] && !(edge_seed && std::abs(std::abs(refined.x) - edge) <= cfg.tol)) {
    out.rho = refined.x;
    out.objective_at_min = refined.fx;
  } else {
    out.rho = seeds[best];
    out.objective_at_min = values[best];
    out.at_boundary = edge_seed;
    if (edge_seed) out.converged = true;
  }
  return out;
}

}  // namespace smdpde
