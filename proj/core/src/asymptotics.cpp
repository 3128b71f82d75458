#include "smdpde/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "smdpde/format.hpp"

namespace smdpde {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxCondition = 1e13;

double mean_inflation(double b) { return 1.0 + b * b / (1.0 + 2.0 * b); }

void validate_block_args(double sigma1, double sigma2, double rho) {
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) {
    throw DomainError("standard deviations must be positive");
  }
  require_open_correlation(rho);
}

double condition_number(const Eigen::Matrix3d& M) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(M);
  const auto& s = svd.singularValues();
  return s(2) > 0.0 ? s(0) / s(2) : INFINITY;
}

// bread^-1 meat bread^-T via pivoted LU solves.
Eigen::Matrix3d sandwich(const Eigen::Matrix3d& bread, const Eigen::Matrix3d& meat,
                         double& condition) {
  condition = condition_number(bread);
  if (!std::isfinite(condition) || condition > kMaxCondition) {
    throw NumericError("asymptotic variance: bread matrix is singular (condition " +
                           format_number(condition) + ")",
                       condition);
  }
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(bread);
  const Eigen::Matrix3d left = lu.solve(meat);                     // B^-1 G
  const Eigen::Matrix3d out = lu.solve(left.transpose()).transpose();  // (B^-1 (B^-1 G)^T)^T
  return 0.5 * (out + out.transpose());
}

}  // namespace

std::string to_string(Method m) { return m == Method::smdpde ? "smdpde" : "mdpde"; }

double smdpde_mean_avar(TuningBeta beta, double sigma2) {
  return std::pow(mean_inflation(beta.value()), 1.5) * sigma2;
}

double mdpde_mean_avar(TuningBeta beta, double sigma2) {
  return std::pow(mean_inflation(beta.value()), 2.0) * sigma2;
}

AsymVarReport smdpde_block_avar(TuningBeta beta, double sigma1, double sigma2, double rho) {
  validate_block_args(sigma1, sigma2, rho);
  const double b = beta.value();
  const double r2 = rho * rho;
  const double one_m = 1.0 - r2;
  const double s12b = std::pow(sigma1 * sigma2, b);
  const double tp_b = std::pow(kTwoPi, b);

  // Expected Hessian of the stacked estimating equations.
  const double d22 = (b * b + 2.0) /
                     (4.0 * std::pow(kTwoPi, b / 2.0) * std::pow(1.0 + b, 1.5) * std::pow(sigma1, b + 4.0));
  const double d44 = (b * b + 2.0) /
                     (4.0 * std::pow(kTwoPi, b / 2.0) * std::pow(1.0 + b, 1.5) * std::pow(sigma2, b + 4.0));
  const double E12 =
      rho * (1.0 + b * b) +
      rho * b * (1.0 - b - (2.0 * r2 * r2 - 4.0 * r2 + 2.0) / ((1.0 + b) * one_m * one_m));
  const double e_den = s12b * tp_b * std::pow(one_m, 1.0 + b / 2.0) * (1.0 + b);
  const double e1 = -E12 / (2.0 * sigma1 * sigma1 * e_den);
  const double e2 = -E12 / (2.0 * sigma2 * sigma2 * e_den);
  const double F = 1.0 + r2 * (1.0 + b) -
                   b * (2.0 * std::pow(rho, 6) - 3.0 * r2 * r2 + 1.0) / ((1.0 + b) * one_m * one_m);
  const double a = F / (s12b * tp_b * std::pow(one_m, 2.0 + b / 2.0) * (1.0 + b));

  // Covariance of the stacked scores.
  const double inv1 = 1.0 / (1.0 + 2.0 * b);
  const double gamma22 = std::sqrt(inv1) * (0.5 + 1.5 * inv1 * inv1 - inv1) -
                         b * b / (2.0 * std::pow(1.0 + b, 3.0));
  const double G22 = (1.0 + b) * (1.0 + b) / (2.0 * tp_b * std::pow(sigma1, 2.0 * b + 4.0)) * gamma22;
  const double G44 = (1.0 + b) * (1.0 + b) / (2.0 * tp_b * std::pow(sigma2, 2.0 * b + 4.0)) * gamma22;
  const double q = (b + 1.0) * (b + 1.0) - b * b * r2;
  const double gamma24 =
      1.0 / std::sqrt(q) *
          (std::pow(1.0 - (1.0 + b * one_m) / q, 2.0) + 2.0 * r2 / (q * q)) -
      b * b / std::pow(1.0 + b, 3.0);
  const double G24 = (1.0 + b) * (1.0 + b) * gamma24 /
                     (4.0 * tp_b * std::pow(sigma1 * sigma2, b + 2.0));
  const double cross = 1.0 - 2.0 * (1.0 + b) * (1.0 + b) / std::pow(1.0 + 2.0 * b, 1.5);
  const double G25 = b * b * rho /
                     (2.0 * std::pow(kTwoPi, 1.5 * b) * std::pow(sigma1, 2.0 * b + 2.0) *
                      std::pow(sigma2, b) * std::pow(one_m, 1.0 + b / 2.0) * std::pow(1.0 + b, 1.5)) *
                     cross;
  const double G45 = b * b * rho /
                     (2.0 * std::pow(kTwoPi, 1.5 * b) * std::pow(sigma2, 2.0 * b + 2.0) *
                      std::pow(sigma1, b) * std::pow(one_m, 1.0 + b / 2.0) * std::pow(1.0 + b, 1.5)) *
                     cross;
  const double gamma55 = r2 * inv1 + (1.0 - 3.0 * r2 * r2 + 2.0 * std::pow(rho, 6)) /
                                         (one_m * one_m * std::pow(1.0 + 2.0 * b, 3.0)) -
                         2.0 * r2 * inv1 * inv1 - b * b * r2 / std::pow(1.0 + b, 4.0);
  const double G55 = (1.0 + b) * (1.0 + b) * gamma55 /
                     (tp_b * tp_b * s12b * s12b * std::pow(one_m, b + 2.0));

  AsymVarReport out;
  out.method = Method::smdpde;
  out.bread << d22, 0.0, 0.0,
               0.0, d44, 0.0,
               e1, e2, a;
  out.meat << G22, G24, G25,
              G24, G44, G45,
              G25, G45, G55;
  const Eigen::Matrix3d cov = sandwich(out.bread, out.meat, out.condition);
  out.var_sigma2_1 = cov(0, 0);
  out.var_sigma2_2 = cov(1, 1);
  out.var_rho = cov(2, 2);
  out.var_mean = smdpde_mean_avar(beta, sigma1 * sigma1);
  return out;
}

AsymVarReport mdpde_block_avar(TuningBeta beta, double sigma1, double sigma2, double rho) {
  validate_block_args(sigma1, sigma2, rho);
  const double b = beta.value();
  const double r2 = rho * rho;
  const double one_m = 1.0 - r2;
  const double s12 = sigma1 * sigma2;
  const double tp_b = std::pow(kTwoPi, b);

  // Expected Hessian of the joint DPD objective.
  const double t = (2.0 - r2) / one_m;
  const double j_norm = tp_b * std::pow(s12, b) * std::pow(one_m, b / 2.0);
  const double J22 = (b * b + t) / (4.0 * std::pow(sigma1, 4.0) * j_norm * (1.0 + b) * (1.0 + b));
  const double J44 = (b * b + t) / (4.0 * std::pow(sigma2, 4.0) * j_norm * (1.0 + b) * (1.0 + b));
  const double J55 = (r2 * (1.0 + b) +
                      (2.0 * std::pow(rho, 6) - 3.0 * r2 * r2 + 1.0) / ((1.0 + b) * one_m * one_m) -
                      2.0 * r2) /
                     (std::pow(s12, b) * tp_b * std::pow(one_m, 2.0 + b / 2.0) * (1.0 + b));
  const double J24 = (1.0 - 2.0 / (1.0 + b) + (1.0 - 2.0 * r2) / (one_m * (1.0 + b) * (1.0 + b))) /
                     (4.0 * std::pow(s12, b + 2.0) * tp_b * std::pow(one_m, b / 2.0));
  const double j_cross = 1.0 - b - 2.0 / (1.0 + b);
  const double J25 = rho * j_cross /
                     (2.0 * sigma1 * sigma1 * std::pow(s12, b) * tp_b *
                      std::pow(one_m, 1.0 + b / 2.0) * (1.0 + b));
  const double J45 = rho * j_cross /
                     (2.0 * sigma2 * sigma2 * std::pow(s12, b) * tp_b *
                      std::pow(one_m, 1.0 + b / 2.0) * (1.0 + b));

  // Score covariance. K24 carries both sigma1^2 and sigma2^2 and K55 the
  // (1+beta)^2 factor; both verified against the Gaussian-moment expansion.
  const double k_norm = tp_b * tp_b * std::pow(s12, 2.0 * b);
  const double kk = (1.0 + b) * (1.0 + b) / std::pow(1.0 + 2.0 * b, 3.0);
  const double mm = std::pow(b / (1.0 + b), 2.0);
  const double K22 = (kk * (4.0 * b * b + t) - mm) /
                     (4.0 * std::pow(sigma1, 4.0) * k_norm * std::pow(one_m, b));
  const double K44 = (kk * (4.0 * b * b + t) - mm) /
                     (4.0 * std::pow(sigma2, 4.0) * k_norm * std::pow(one_m, b));
  const double K24 = (kk * (4.0 * b * b - r2 / one_m) - mm) /
                     (4.0 * sigma1 * sigma1 * sigma2 * sigma2 * k_norm * std::pow(one_m, b));
  const double k_cross = (1.0 + b) * (1.0 + b) / std::pow(1.0 + 2.0 * b, 2.0) *
                             (1.0 - 2.0 * b - 2.0 / (1.0 + 2.0 * b)) +
                         mm;
  const double K25 = rho * k_cross / (2.0 * sigma1 * sigma1 * k_norm * std::pow(one_m, 1.0 + b));
  const double K45 = rho * k_cross / (2.0 * sigma2 * sigma2 * k_norm * std::pow(one_m, 1.0 + b));
  const double inv1 = 1.0 / (1.0 + 2.0 * b);
  const double gamma55 = r2 * inv1 + (1.0 - 3.0 * r2 * r2 + 2.0 * std::pow(rho, 6)) /
                                         (one_m * one_m * std::pow(1.0 + 2.0 * b, 3.0)) -
                         2.0 * r2 * inv1 * inv1 - b * b * r2 / std::pow(1.0 + b, 4.0);
  const double K55 = (1.0 + b) * (1.0 + b) * gamma55 / (k_norm * std::pow(one_m, 2.0 + b));

  AsymVarReport out;
  out.method = Method::mdpde;
  out.bread << J22, J24, J25,
               J24, J44, J45,
               J25, J45, J55;
  out.meat << K22, K24, K25,
              K24, K44, K45,
              K25, K45, K55;
  const Eigen::Matrix3d cov = sandwich(out.bread, out.meat, out.condition);
  out.var_sigma2_1 = cov(0, 0);
  out.var_sigma2_2 = cov(1, 1);
  out.var_rho = cov(2, 2);
  out.var_mean = mdpde_mean_avar(beta, sigma1 * sigma1);
  return out;
}

AreTables are_tables(const std::vector<double>& betas, const std::vector<double>& rhos) {
  if (betas.empty()) throw ValidationError("ARE tables need at least one beta");
  if (rhos.empty()) throw ValidationError("ARE tables need at least one rho");
  for (double r : rhos) require_open_correlation(r);

  AreTables t;
  t.betas = betas;
  t.rhos = rhos;
  for (double bv : betas) {
    const TuningBeta b(bv);
    const auto s = smdpde_block_avar(b, 1.0, 1.0, 0.0);
    const auto m = mdpde_block_avar(b, 1.0, 1.0, 0.0);
    t.marginal.push_back({bv, 100.0 / smdpde_mean_avar(b, 1.0), 100.0 / mdpde_mean_avar(b, 1.0),
                          200.0 / s.var_sigma2_1, 200.0 / m.var_sigma2_1});
  }
  for (double r : rhos) {
    const double mle_var = (1.0 - r * r) * (1.0 - r * r);
    for (double bv : betas) {
      const TuningBeta b(bv);
      t.correlation.push_back({r, bv, 100.0 * mle_var / smdpde_block_avar(b, 1.0, 1.0, r).var_rho,
                               100.0 * mle_var / mdpde_block_avar(b, 1.0, 1.0, r).var_rho});
    }
  }
  return t;
}

std::string marginal_are_csv(const AreTables& t) {
  std::ostringstream os;
  os << "estimator,method";
  for (double b : t.betas) os << ",beta=" << format_number(b);
  os << "\r\n";
  const auto row = [&](const char* est, const char* method, double AreRow::*field) {
    os << est << ',' << method;
    for (const auto& r : t.marginal) os << ',' << format_number(r.*field);
    os << "\r\n";
  };
  row("Mean", "SMDPDE", &AreRow::mean_smdpde);
  row("Mean", "MDPDE", &AreRow::mean_mdpde);
  row("Variance", "SMDPDE", &AreRow::variance_smdpde);
  row("Variance", "MDPDE", &AreRow::variance_mdpde);
  return os.str();
}

std::string correlation_are_csv(const AreTables& t) {
  std::ostringstream os;
  os << "rho";
  for (double b : t.betas) os << ",beta=" << format_number(b);
  os << "\r\n";
  for (std::size_t i = 0; i < t.rhos.size(); ++i) {
    os << format_number(t.rhos[i]);
    for (std::size_t j = 0; j < t.betas.size(); ++j) {
      const auto& c = t.cell(i, j);
      os << ',' << format_number(c.smdpde) << '(' << format_number(c.mdpde) << ')';
    }
    os << "\r\n";
  }
  return os.str();
}

}  // namespace smdpde
