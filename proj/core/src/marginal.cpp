#include "smdpde/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "smdpde/normal_model.hpp"

namespace smdpde {

namespace {

constexpr double kMadScale = 1.4826;
constexpr int kMaxHalvings = 20;

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

MarginalParams sample_moments(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, ss / n};
}

MarginalParams initial_point(std::span<const double> x, const SolverConfig& cfg,
                             const MarginalParams& moments) {
  switch (cfg.init) {
    case InitKind::mean_var:
      return moments;
    case InitKind::user:
      require_positive_variance(cfg.user_start.sigma2);
      return cfg.user_start;
    case InitKind::median_mad:
      break;
  }
  std::vector<double> v(x.begin(), x.end());
  const double med = median_of(v);
  for (double& e : v) e = std::abs(e - med);
  const double mad = kMadScale * median_of(std::move(v));
  // More than half the sample tied at the median: MAD carries no scale.
  if (!(mad > 0.0)) return {med, moments.sigma2};
  return {med, mad * mad};
}

double relative_change(const MarginalParams& from, const MarginalParams& to) {
  return std::max(std::abs(to.mu - from.mu) / (1.0 + std::abs(from.mu)),
                  std::abs(to.sigma2 - from.sigma2) / (1.0 + from.sigma2));
}

MarginalParams irls_update(std::span<const double> x, const MarginalParams& p,
                           double beta) {
  const double n = static_cast<double>(x.size());
  double sw = 0.0;
  double swx = 0.0;
  for (double xi : x) {
    const double r = xi - p.mu;
    const double w = std::exp(-beta * r * r / (2.0 * p.sigma2));
    sw += w;
    swx += w * xi;
  }
  if (!(sw > 0.0)) return p;
  const double mu = swx / sw;
  double swr2 = 0.0;
  for (double xi : x) {
    const double r_old = xi - p.mu;
    const double w = std::exp(-beta * r_old * r_old / (2.0 * p.sigma2));
    const double r = xi - mu;
    swr2 += w * r * r;
  }
  const double denom = sw - n * beta * std::pow(1.0 + beta, -1.5);
  const double sigma2 = denom > 0.0 ? swr2 / denom : swr2 / sw;
  return {mu, sigma2};
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw ValidationError("solver tolerance must be positive");
  if (max_iter < 1) throw ValidationError("solver max_iter must be at least 1");
}

MarginalEstimate fit_marginal(std::span<const double> x, TuningBeta beta,
                              const SolverConfig& cfg) {
  cfg.validate();
  if (x.size() < 2) throw ValidationError("marginal fit needs at least two observations");
  for (double v : x) {
    if (!std::isfinite(v)) throw ValidationError("sample contains non-finite values");
  }
  const MarginalParams moments = sample_moments(x);
  if (!(moments.sigma2 > 0.0)) {
    throw DegenerateSampleError("constant sample: variance is zero");
  }

  MarginalEstimate out;
  if (beta.is_mle()) {
    out.params = moments;
    out.converged = true;
    return out;
  }

  const double b = beta.value();
  MarginalParams cur = initial_point(x, cfg, moments);
  double h_cur = marginal_objective(x, cur, beta);

  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    out.iterations = it;
    const MarginalParams proposal = irls_update(x, cur, b);
    MarginalParams next = proposal;
    double h_next = (next.sigma2 > 0.0 && std::isfinite(next.sigma2))
                        ? marginal_objective(x, next, beta)
                        : INFINITY;
    const double slack = 1e-13 * (1.0 + std::abs(h_cur));
    int halvings = 0;
    double t = 1.0;
    while (!(h_next <= h_cur + slack) && halvings < kMaxHalvings) {
      t *= 0.5;
      ++halvings;
      next = {cur.mu + t * (proposal.mu - cur.mu),
              cur.sigma2 + t * (proposal.sigma2 - cur.sigma2)};
      h_next = marginal_objective(x, next, beta);
    }
    if (halvings > 0) ++out.halvings;
    if (!(h_next <= h_cur + slack)) {
      out.converged = false;
      out.final_step_norm = relative_change(cur, next);
      break;
    }
    out.final_step_norm = relative_change(cur, next);
    cur = next;
    h_cur = h_next;
    if (out.final_step_norm <= cfg.tol) {
      out.converged = true;
      break;
    }
  }
  out.params = cur;
  return out;
}

std::array<double, 2> marginal_estimating_residuals(std::span<const double> x,
                                                    const MarginalParams& p,
                                                    TuningBeta beta) {
  require_positive_variance(p.sigma2);
  const double b = beta.value();
  const double n = static_cast<double>(x.size());
  double sw = 0.0;
  double swr = 0.0;
  double swr2 = 0.0;
  for (double xi : x) {
    const double r = xi - p.mu;
    const double w = std::exp(-b * r * r / (2.0 * p.sigma2));
    sw += w;
    swr += w * r;
    swr2 += w * r * r;
  }
  const double denom = sw - n * b * std::pow(1.0 + b, -1.5);
  return {swr / (p.sigma() * sw), (swr2 - p.sigma2 * denom) / (p.sigma2 * sw)};
}

}  // namespace smdpde
