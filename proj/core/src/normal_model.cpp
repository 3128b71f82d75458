#include "smdpde/normal_model.hpp"

#include <cmath>

namespace smdpde {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

void require_sample(std::span<const double> x) {
  if (x.empty()) throw ValidationError("objective requires a non-empty sample");
}

void require_pair_sample(std::span<const double> xj, std::span<const double> xk) {
  if (xj.size() != xk.size()) {
    throw ValidationError("paired samples differ in length: " +
                          std::to_string(xj.size()) + " vs " +
                          std::to_string(xk.size()));
  }
  require_sample(xj);
}

void require_guarded_correlation(double rho) {
  require_open_correlation(rho);
  // Small slack so that the guard value itself is admissible after rounding.
  if (std::abs(rho) > 1.0 - kRhoGuard + 1e-15) {
    throw DomainError("correlation must satisfy |rho| <= 1 - 1e-6, got " +
                      std::to_string(rho));
  }
}

void validate(const PairParams& p) {
  require_positive_variance(p.a.sigma2);
  require_positive_variance(p.b.sigma2);
}

}  // namespace

double univariate_power_integral(const MarginalParams& p, TuningBeta beta) {
  require_positive_variance(p.sigma2);
  const double b = beta.value();
  if (beta.is_mle()) return 1.0;
  return std::exp(-0.5 * b * (kLog2Pi + std::log(p.sigma2))) / std::sqrt(1.0 + b);
}

double bivariate_power_integral(const PairParams& p, TuningBeta beta) {
  validate(p);
  require_open_correlation(p.rho);
  if (beta.is_mle()) return 1.0;
  const double b = beta.value();
  const double log_det =
      std::log(p.a.sigma2) + std::log(p.b.sigma2) + std::log1p(-p.rho * p.rho);
  return std::exp(-b * kLog2Pi - 0.5 * b * log_det) / (1.0 + b);
}

double log_density(double x, const MarginalParams& p) {
  const double r = x - p.mu;
  return -0.5 * (kLog2Pi + std::log(p.sigma2)) - 0.5 * r * r / p.sigma2;
}

double log_density(double x1, double x2, const PairParams& p) {
  const double z1 = (x1 - p.a.mu) / p.a.sigma();
  const double z2 = (x2 - p.b.mu) / p.b.sigma();
  const double one_m = 1.0 - p.rho * p.rho;
  const double q = (z1 * z1 + z2 * z2 - 2.0 * p.rho * z1 * z2) / one_m;
  return -kLog2Pi - 0.5 * (std::log(p.a.sigma2) + std::log(p.b.sigma2) + std::log(one_m)) -
         0.5 * q;
}

double marginal_objective(std::span<const double> x, const MarginalParams& p,
                          TuningBeta beta) {
  require_sample(x);
  require_positive_variance(p.sigma2);
  const double n = static_cast<double>(x.size());
  if (beta.is_mle()) {
    double s = 0.0;
    for (double xi : x) s -= log_density(xi, p);
    return s / n;
  }
  const double b = beta.value();
  double s = 0.0;
  for (double xi : x) s += std::exp(b * log_density(xi, p));
  return univariate_power_integral(p, beta) - (1.0 + 1.0 / b) * s / n;
}

std::array<double, 2> marginal_objective_gradient(std::span<const double> x,
                                                  const MarginalParams& p,
                                                  TuningBeta beta) {
  require_sample(x);
  require_positive_variance(p.sigma2);
  const double n = static_cast<double>(x.size());
  const double s2 = p.sigma2;
  double g_mu = 0.0;
  double g_s2 = 0.0;
  if (beta.is_mle()) {
    for (double xi : x) {
      const double r = xi - p.mu;
      g_mu -= r / s2;
      g_s2 -= (r * r / s2 - 1.0) / (2.0 * s2);
    }
    return {g_mu / n, g_s2 / n};
  }
  const double b = beta.value();
  for (double xi : x) {
    const double r = xi - p.mu;
    const double fb = std::exp(b * log_density(xi, p));
    g_mu += fb * r / s2;
    g_s2 += fb * (r * r / s2 - 1.0) / (2.0 * s2);
  }
  const double integral = univariate_power_integral(p, beta);
  return {-(1.0 + b) * g_mu / n, -0.5 * b * integral / s2 - (1.0 + b) * g_s2 / n};
}

double pairwise_objective(std::span<const double> xj, std::span<const double> xk,
                          const PairParams& p, TuningBeta beta) {
  require_pair_sample(xj, xk);
  validate(p);
  require_guarded_correlation(p.rho);
  const double n = static_cast<double>(xj.size());
  if (beta.is_mle()) {
    double s = 0.0;
    for (std::size_t i = 0; i < xj.size(); ++i) s -= log_density(xj[i], xk[i], p);
    return s / n;
  }
  const double b = beta.value();
  double s = 0.0;
  for (std::size_t i = 0; i < xj.size(); ++i) {
    s += std::exp(b * log_density(xj[i], xk[i], p));
  }
  return bivariate_power_integral(p, beta) - (1.0 + 1.0 / b) * s / n;
}

std::array<double, 5> bivariate_scores(double x1, double x2, const PairParams& p) {
  const double sa = p.a.sigma();
  const double sb = p.b.sigma();
  const double z1 = (x1 - p.a.mu) / sa;
  const double z2 = (x2 - p.b.mu) / sb;
  const double rho = p.rho;
  const double one_m = 1.0 - rho * rho;
  const double quad = z1 * z1 + z2 * z2 - 2.0 * rho * z1 * z2;
  return {
      (z1 - rho * z2) / (one_m * sa),
      -0.5 / p.a.sigma2 + (z1 - rho * z2) * z1 / (2.0 * p.a.sigma2 * one_m),
      (z2 - rho * z1) / (one_m * sb),
      -0.5 / p.b.sigma2 + (z2 - rho * z1) * z2 / (2.0 * p.b.sigma2 * one_m),
      rho / one_m + z1 * z2 / one_m - rho * quad / (one_m * one_m),
  };
}

std::array<double, 5> pairwise_objective_gradient(std::span<const double> xj,
                                                  std::span<const double> xk,
                                                  const PairParams& p,
                                                  TuningBeta beta) {
  require_pair_sample(xj, xk);
  validate(p);
  require_guarded_correlation(p.rho);
  const double n = static_cast<double>(xj.size());
  std::array<double, 5> acc{};
  const double b = beta.value();
  for (std::size_t i = 0; i < xj.size(); ++i) {
    const auto u = bivariate_scores(xj[i], xk[i], p);
    const double w = beta.is_mle() ? 1.0 : std::exp(b * log_density(xj[i], xk[i], p));
    for (std::size_t k = 0; k < 5; ++k) acc[k] += w * u[k];
  }
  std::array<double, 5> g{};
  if (beta.is_mle()) {
    for (std::size_t k = 0; k < 5; ++k) g[k] = -acc[k] / n;
    return g;
  }
  const double integral = bivariate_power_integral(p, beta);
  for (std::size_t k = 0; k < 5; ++k) g[k] = -(1.0 + b) * acc[k] / n;
  g[1] += -0.5 * b * integral / p.a.sigma2;
  g[3] += -0.5 * b * integral / p.b.sigma2;
  g[4] += b * p.rho * integral / (1.0 - p.rho * p.rho);
  return g;
}

}  // namespace smdpde
