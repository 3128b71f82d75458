#include "smdpde/mdpde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace smdpde {

namespace {

constexpr double kMadScale = 1.4826;

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  return 0.5 * (*std::max_element(v.begin(), mid) + upper);
}

double relative_change(const Eigen::VectorXd& mu0, const Eigen::VectorXd& mu1,
                       const Eigen::MatrixXd& S0, const Eigen::MatrixXd& S1) {
  double c = 0.0;
  for (Eigen::Index i = 0; i < mu0.size(); ++i) {
    c = std::max(c, std::abs(mu1(i) - mu0(i)) / (1.0 + std::abs(mu0(i))));
  }
  for (Eigen::Index i = 0; i < S0.size(); ++i) {
    c = std::max(c, std::abs(S1(i) - S0(i)) / (1.0 + std::abs(S0(i))));
  }
  return c;
}

}  // namespace

std::string to_string(MdpdeStatus s) {
  switch (s) {
    case MdpdeStatus::converged: return "converged";
    case MdpdeStatus::too_few_rows: return "too_few_rows";
    case MdpdeStatus::nonpositive_denominator: return "nonpositive_denominator";
    case MdpdeStatus::lost_definiteness: return "lost_definiteness";
    case MdpdeStatus::max_iterations: return "max_iterations";
  }
  return "unknown";
}

MdpdeFitResult fit_mle(const DataMatrix& data) {
  const Eigen::MatrixXd& X = data.values();
  const double n = static_cast<double>(data.n());
  MdpdeFitResult out;
  out.mu_hat = X.colwise().mean().transpose();
  const Eigen::MatrixXd C = X.rowwise() - out.mu_hat.transpose();
  out.Sigma_hat = (C.transpose() * C) / n;
  out.converged = true;
  for (Eigen::Index j = 0; j < out.Sigma_hat.rows(); ++j) {
    if (!(out.Sigma_hat(j, j) > 0.0)) out.degenerate_columns = true;
  }
  return out;
}

double joint_objective(const DataMatrix& data, const Eigen::VectorXd& mu,
                       const Eigen::MatrixXd& Sigma, TuningBeta beta) {
  const Eigen::LLT<Eigen::MatrixXd> llt(Sigma);
  if (llt.info() != Eigen::Success) throw DomainError("joint objective: Sigma is not PD");
  const double p = static_cast<double>(data.p());
  const double n = static_cast<double>(data.n());
  const auto& L = llt.matrixL();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < Sigma.rows(); ++i) log_det += 2.0 * std::log(L(i, i));
  const double log_norm = -0.5 * p * std::log(2.0 * std::numbers::pi) - 0.5 * log_det;

  const Eigen::MatrixXd centered = data.values().rowwise() - mu.transpose();
  const Eigen::MatrixXd z = llt.matrixL().solve(centered.transpose());
  const Eigen::VectorXd d2 = z.colwise().squaredNorm().transpose();

  if (beta.is_mle()) return -(log_norm * n - 0.5 * d2.sum()) / n;
  const double b = beta.value();
  double s = 0.0;
  for (Eigen::Index i = 0; i < d2.size(); ++i) s += std::exp(b * (log_norm - 0.5 * d2(i)));
  const double integral = std::exp(b * log_norm) * std::pow(1.0 + b, -0.5 * p);
  return integral - (1.0 + 1.0 / b) * s / n;
}

MdpdeFitResult fit_mdpde(const DataMatrix& data, TuningBeta beta, const SolverConfig& cfg) {
  cfg.validate();
  if (beta.is_mle()) return fit_mle(data);

  const std::size_t n = data.n();
  const std::size_t p = data.p();
  const auto pi = static_cast<Eigen::Index>(p);
  MdpdeFitResult out;
  out.mu_hat = Eigen::VectorXd::Zero(pi);
  out.Sigma_hat = Eigen::MatrixXd::Identity(pi, pi);
  if (n <= p) {
    out.status = MdpdeStatus::too_few_rows;
    return out;
  }

  const Eigen::MatrixXd& X = data.values();
  Eigen::VectorXd mu(pi);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(pi, pi);
  for (std::size_t j = 0; j < p; ++j) {
    const auto col = data.column(j);
    std::vector<double> v(col.begin(), col.end());
    const double med = median_of(v);
    for (double& e : v) e = std::abs(e - med);
    const double mad = kMadScale * median_of(std::move(v));
    const auto jj = static_cast<Eigen::Index>(j);
    mu(jj) = med;
    S(jj, jj) = mad > 0.0 ? mad * mad : (X.col(jj).array() - X.col(jj).mean()).square().mean();
  }
  if (!(S.diagonal().array() > 0.0).all()) {
    out.status = MdpdeStatus::lost_definiteness;
    return out;
  }

  const double b = beta.value();
  const double shrink = static_cast<double>(n) * b *
                        std::pow(1.0 + b, -0.5 * static_cast<double>(p) - 1.0);
  out.status = MdpdeStatus::max_iterations;
  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    out.iterations = it;
    const Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) {
      out.status = MdpdeStatus::lost_definiteness;
      break;
    }
    const Eigen::MatrixXd centered = X.rowwise() - mu.transpose();
    const Eigen::MatrixXd z = llt.matrixL().solve(centered.transpose());
    const Eigen::ArrayXd w = (-0.5 * b * z.colwise().squaredNorm().array()).exp().transpose();
    const double sw = w.sum();
    if (!(sw > 0.0)) {
      out.status = MdpdeStatus::nonpositive_denominator;
      break;
    }
    const Eigen::VectorXd mu_next = (X.transpose() * w.matrix()) / sw;
    const double denom = sw - shrink;
    if (!(denom > 0.0)) {
      out.status = MdpdeStatus::nonpositive_denominator;
      break;
    }
    const Eigen::MatrixXd r = X.rowwise() - mu_next.transpose();
    Eigen::MatrixXd S_next = (r.transpose() * (r.array().colwise() * w).matrix()) / denom;
    S_next = (0.5 * (S_next + S_next.transpose())).eval();
    if (!S_next.allFinite() || min_eigenvalue(S_next) <= 0.0) {
      out.status = MdpdeStatus::lost_definiteness;
      break;
    }
    const double change = relative_change(mu, mu_next, S, S_next);
    mu = mu_next;
    S = std::move(S_next);
    if (change <= cfg.tol) {
      out.status = MdpdeStatus::converged;
      out.converged = true;
      break;
    }
  }
  out.mu_hat = mu;
  out.Sigma_hat = S;
  return out;
}

}  // namespace smdpde
