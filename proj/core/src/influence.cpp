#include "smdpde/influence.hpp"

#include <cmath>
#include <numbers>

#include "smdpde/normal_model.hpp"

namespace smdpde {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// int f^(1+beta) (-sigma2 + (x - mu)^2) dx
double centered_second_moment_integral(double sigma2, double b) {
  return -b / (std::pow(kTwoPi, b / 2.0) * std::pow(sigma2, b / 2.0 - 1.0) *
               std::pow(1.0 + b, 1.5));
}

// int f^(1+beta) ((x - mu)^2 / sigma2 - 1)^2 dx
double squared_score_integral(double sigma2, double b) {
  return (b * b + 2.0) /
         (std::pow(kTwoPi, b / 2.0) * std::pow(sigma2, b / 2.0) * std::pow(1.0 + b, 2.5));
}

}  // namespace

double if_mean(double y, const MarginalParams& m, TuningBeta beta) {
  require_positive_variance(m.sigma2);
  const double b = beta.value();
  const double fb = std::exp(b * log_density(y, m));
  return -std::pow(m.sigma2, b / 2.0) * std::pow(1.0 + b, 1.5) * std::pow(kTwoPi, b / 2.0) *
         (y - m.mu) * fb;
}

double if_variance(double y, const MarginalParams& m, TuningBeta beta) {
  require_positive_variance(m.sigma2);
  const double b = beta.value();
  const double r = y - m.mu;
  const double fb = std::exp(b * log_density(y, m));
  const double numerator = fb * (r * r - m.sigma2) - centered_second_moment_integral(m.sigma2, b);
  return numerator / (0.5 * squared_score_integral(m.sigma2, b));
}

double if_correlation(double y1, double y2, const PairParams& model, TuningBeta beta) {
  require_positive_variance(model.a.sigma2);
  require_positive_variance(model.b.sigma2);
  require_open_correlation(model.rho);
  const double b = beta.value();
  const double rho = model.rho;
  const double one_m = 1.0 - rho * rho;
  const double s1s2 = model.a.sigma2 * model.b.sigma2;
  // Shared normalizer (2 pi)^beta (s1^2 s2^2)^(beta/2).
  const double norm = std::pow(kTwoPi, b) * std::pow(s1s2, b / 2.0);

  const double fb = std::exp(b * log_density(y1, y2, model));
  const double u_rho = bivariate_scores(y1, y2, model)[4];

  // int f^(1+beta) U_rho
  const double score_mean = rho * b / (norm * std::pow(one_m, 1.0 + b / 2.0) * std::pow(1.0 + b, 2.0));
  // int f^(1+beta) U_rho^2
  const double score_sq =
      (rho * rho + (1.0 - 3.0 * std::pow(rho, 4) + 2.0 * std::pow(rho, 6)) /
                       (one_m * one_m * (1.0 + b) * (1.0 + b)) -
       2.0 * rho * rho / (1.0 + b)) /
      (norm * std::pow(one_m, 2.0 + b / 2.0) * (1.0 + b));
  // Plug-in marginal variances shift the rho equation through A(x, y).
  const double var_shift =
      -rho * (1.0 + b * b) / (2.0 * norm * std::pow(one_m, 1.0 + b / 2.0) * std::pow(1.0 + b, 3.0)) *
      (if_variance(y1, model.a, beta) / model.a.sigma2 +
       if_variance(y2, model.b, beta) / model.b.sigma2);

  return (fb * u_rho - score_mean - var_shift) / score_sq;
}

InfluenceGrid influence_grid(InfluenceTarget target, int component, const PairParams& model,
                             TuningBeta beta, const std::vector<double>& ys,
                             const std::vector<double>& zs) {
  if (ys.empty()) throw ValidationError("influence grid is empty");
  InfluenceGrid grid{target, component, beta, model, {}};
  if (target == InfluenceTarget::correlation) {
    if (zs.empty()) throw ValidationError("influence grid is empty");
    require_open_correlation(model.rho);
    grid.points.reserve(ys.size() * zs.size());
    for (double y1 : ys) {
      for (double y2 : zs) grid.points.push_back({y1, y2, if_correlation(y1, y2, model, beta)});
    }
    return grid;
  }
  if (component != 1 && component != 2) {
    throw ValidationError("influence component must be 1 or 2");
  }
  const MarginalParams& m = component == 1 ? model.a : model.b;
  grid.points.reserve(ys.size());
  for (double y : ys) {
    const double v = target == InfluenceTarget::mean ? if_mean(y, m, beta) : if_variance(y, m, beta);
    grid.points.push_back(component == 1 ? InfluencePoint{y, 0.0, v} : InfluencePoint{0.0, y, v});
  }
  return grid;
}

}  // namespace smdpde
