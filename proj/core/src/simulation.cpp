#include "smdpde/simulation.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "smdpde/mdpde.hpp"
#include "smdpde/parallel.hpp"

namespace smdpde {

namespace {

using Engine = boost::random::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& Sigma) {
  if (Sigma.rows() != Sigma.cols() || Sigma.rows() == 0) {
    throw ValidationError("covariance must be a non-empty square matrix");
  }
  if (!Sigma.isApprox(Sigma.transpose(), 1e-12)) {
    throw ValidationError("covariance must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(Sigma);
  if (llt.info() != Eigen::Success) {
    throw ValidationError("covariance must be positive definite");
  }
  return llt.matrixL();
}

// Row of iid standard normals, drawn left to right.
void draw_standard(Engine& eng, Eigen::VectorXd& z) {
  boost::random::normal_distribution<double> normal;
  for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = normal(eng);
}

struct Fit {
  bool ok = false;
  bool pd_corrected = false;
  LocationScatter est;
};

Fit fit_method(const MethodSpec& m, const DataMatrix& data, const SolverConfig& solver) {
  Fit out;
  switch (m.kind) {
    case MethodKind::mle: {
      auto r = fit_mle(data);
      out.ok = !r.degenerate_columns;
      out.est = {std::move(r.mu_hat), std::move(r.Sigma_hat)};
      break;
    }
    case MethodKind::smdpde: {
      EstimateOptions opt;
      opt.solver = solver;
      opt.threads = 1;
      auto r = estimate(data, TuningBeta(m.beta), opt);
      out.ok = r.converged();
      out.pd_corrected = r.pd_corrected;
      out.est = {std::move(r.mu_hat), std::move(r.Sigma_hat)};
      break;
    }
    case MethodKind::mdpde: {
      auto r = fit_mdpde(data, TuningBeta(m.beta), solver);
      out.ok = r.converged;
      out.est = {std::move(r.mu_hat), std::move(r.Sigma_hat)};
      break;
    }
  }
  return out;
}

}  // namespace

std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t replication) {
  return splitmix64(seed + (replication + 1) * 0x9E3779B97F4A7C15ULL);
}

Eigen::MatrixXd gen_block_banded(std::size_t p, double rho) {
  if (p < 2) throw ValidationError("block-banded covariance needs p >= 2");
  if (!(std::abs(rho) <= 1.0)) throw ValidationError("block-banded rho must satisfy |rho| <= 1");
  const auto P = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd S = Eigen::MatrixXd::Identity(P, P);
  if (p == 2) {
    S(0, 1) = S(1, 0) = rho;
    return S;
  }
  const Eigen::Index p1 = P / 2;
  for (Eigen::Index i = 0; i < p1; ++i) {
    for (Eigen::Index j = 0; j < p1; ++j) {
      S(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
    }
  }
  return S;
}

DataMatrix sample_mvn(std::size_t n, const Eigen::VectorXd& mu, const Eigen::MatrixXd& Sigma,
                      std::uint64_t seed) {
  const Eigen::MatrixXd L = cholesky_factor(Sigma);
  if (mu.size() != L.rows()) throw ValidationError("mean and covariance dimensions differ");
  Engine eng(seed);
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd X(N, L.rows());
  Eigen::VectorXd z(L.rows());
  for (Eigen::Index i = 0; i < N; ++i) {
    draw_standard(eng, z);
    X.row(i) = (mu + L * z).transpose();
  }
  return DataMatrix(std::move(X));
}

ContaminatedSample contaminate_casewise(std::size_t n, std::size_t p, double eps, double shift,
                                        const Eigen::MatrixXd& Sigma, std::uint64_t seed) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw ValidationError("eps must lie in [0,1]");
  if (!std::isfinite(shift)) throw ValidationError("shift must be finite");
  const Eigen::MatrixXd L = cholesky_factor(Sigma);
  if (static_cast<std::size_t>(L.rows()) != p) {
    throw ValidationError("covariance dimension differs from p");
  }
  Engine eng(seed);
  boost::random::uniform_01<double> unif;
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd X(N, L.rows());
  Eigen::VectorXd z(L.rows());
  std::vector<bool> flag(n, false);
  for (Eigen::Index i = 0; i < N; ++i) {
    const bool bad = unif(eng) < eps;
    draw_standard(eng, z);
    if (bad) {
      X.row(i) = (z.array() + shift).transpose();
      flag[static_cast<std::size_t>(i)] = true;
    } else {
      X.row(i) = (L * z).transpose();
    }
  }
  return {DataMatrix(std::move(X)), std::move(flag)};
}

ContaminatedSample contaminate_cellwise(std::uint64_t seed, const CellwiseDesign& design,
                                        const Eigen::MatrixXd& Sigma) {
  if (design.p < 1) throw ValidationError("cellwise design needs p >= 1");
  if (!std::isfinite(design.shift)) throw ValidationError("shift must be finite");
  const auto P = static_cast<Eigen::Index>(design.p);
  const Eigen::MatrixXd L =
      Sigma.size() == 0 ? Eigen::MatrixXd::Identity(P, P) : cholesky_factor(Sigma);
  if (L.rows() != P) throw ValidationError("covariance dimension differs from p");
  const std::size_t n = design.clean_count + design.p * design.per_axis_count;
  Engine eng(seed);
  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), P);
  Eigen::VectorXd z(P);
  std::vector<bool> flag(n, false);
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < design.clean_count; ++i, ++row) {
    draw_standard(eng, z);
    X.row(row) = (L * z).transpose();
  }
  for (Eigen::Index axis = 0; axis < P; ++axis) {
    for (std::size_t i = 0; i < design.per_axis_count; ++i, ++row) {
      draw_standard(eng, z);
      z(axis) += design.shift;
      X.row(row) = z.transpose();
      flag[static_cast<std::size_t>(row)] = true;
    }
  }
  return {DataMatrix(std::move(X)), std::move(flag)};
}

Metrics bias_mse(const std::vector<LocationScatter>& estimates, const LocationScatter& truth) {
  if (estimates.empty()) throw ValidationError("bias_mse needs at least one estimate");
  const Eigen::Index p = truth.mu.size();
  if (truth.Sigma.rows() != p || truth.Sigma.cols() != p) {
    throw ValidationError("truth location and scatter dimensions differ");
  }
  Eigen::VectorXd mu_sum = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd S_sum = Eigen::MatrixXd::Zero(p, p);
  Metrics m;
  for (const auto& e : estimates) {
    if (e.mu.size() != p || e.Sigma.rows() != p || e.Sigma.cols() != p) {
      throw ValidationError("estimate dimension differs from truth");
    }
    mu_sum += e.mu;
    S_sum += e.Sigma;
    m.mse_location += (e.mu - truth.mu).squaredNorm();
    m.mse_scatter += (e.Sigma - truth.Sigma).squaredNorm();
  }
  const double k = static_cast<double>(estimates.size());
  m.bias_location = (mu_sum / k - truth.mu).norm();
  m.bias_scatter = (S_sum / k - truth.Sigma).norm();
  m.mse_location /= k;
  m.mse_scatter /= k;
  return m;
}

std::string MethodSpec::name() const {
  switch (kind) {
    case MethodKind::mle: return "mle";
    case MethodKind::smdpde: return "smdpde";
    case MethodKind::mdpde: return "mdpde";
  }
  return "unknown";
}

void ScenarioConfig::validate() const {
  if (n < 2) throw ValidationError("n: must be at least 2");
  if (p < 1) throw ValidationError("p: must be at least 1");
  if (replications < 1) throw ValidationError("replications: must be at least 1");
  if (methods.empty()) throw ValidationError("methods: at least one method is required");
  for (const auto& m : methods) {
    if (m.kind != MethodKind::mle) static_cast<void>(TuningBeta(m.beta));
  }
  if (threads < 0) throw ValidationError("threads: must be non-negative");
  switch (sigma_kind) {
    case SigmaKind::identity:
      break;
    case SigmaKind::block_banded:
      if (p < 2) throw ValidationError("sigma: block_banded requires p >= 2");
      if (!(std::abs(banded_rho) <= 1.0)) throw ValidationError("sigma: rho must satisfy |rho| <= 1");
      break;
    case SigmaKind::custom:
      if (custom_sigma.rows() != static_cast<Eigen::Index>(p) ||
          custom_sigma.cols() != static_cast<Eigen::Index>(p)) {
        throw ValidationError("sigma: custom matrix must be p x p");
      }
      break;
  }
  switch (contamination) {
    case ContaminationKind::none:
      break;
    case ContaminationKind::casewise:
      if (!(eps >= 0.0 && eps < 1.0)) throw ValidationError("eps: must satisfy 0 <= eps < 1");
      if (!std::isfinite(shift)) throw ValidationError("shift: must be finite");
      break;
    case ContaminationKind::cellwise:
      if (!std::isfinite(shift)) throw ValidationError("shift: must be finite");
      if (rows() < 2) throw ValidationError("clean_count: design has fewer than two rows");
      break;
  }
  solver.validate();
}

Eigen::MatrixXd ScenarioConfig::sigma() const {
  const auto P = static_cast<Eigen::Index>(p);
  switch (sigma_kind) {
    case SigmaKind::identity: return Eigen::MatrixXd::Identity(P, P);
    case SigmaKind::block_banded: return gen_block_banded(p, banded_rho);
    case SigmaKind::custom: return custom_sigma;
  }
  return Eigen::MatrixXd::Identity(P, P);
}

std::size_t ScenarioConfig::rows() const {
  return contamination == ContaminationKind::cellwise ? clean_count + p * per_axis_count : n;
}

SimReport run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const Eigen::MatrixXd Sigma = cfg.sigma();
  cholesky_factor(Sigma);
  const LocationScatter truth{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cfg.p)), Sigma};

  const std::size_t R = cfg.replications;
  const std::size_t M = cfg.methods.size();
  // fits[r * M + m]; failed fits stay default (ok = false).
  std::vector<Fit> fits(R * M);
  std::vector<char> threw(R * M, 0);

  parallel_for(R, cfg.threads, [&](std::size_t r) {
    const std::uint64_t s = replication_seed(cfg.seed, r);
    const DataMatrix data = [&] {
      switch (cfg.contamination) {
        case ContaminationKind::casewise:
          return contaminate_casewise(cfg.n, cfg.p, cfg.eps, cfg.shift, Sigma, s).data;
        case ContaminationKind::cellwise:
          return contaminate_cellwise(
                     s, CellwiseDesign{cfg.p, cfg.clean_count, cfg.per_axis_count, cfg.shift},
                     Sigma)
              .data;
        case ContaminationKind::none:
          break;
      }
      return sample_mvn(cfg.n, truth.mu, Sigma, s);
    }();
    for (std::size_t m = 0; m < M; ++m) {
      try {
        fits[r * M + m] = fit_method(cfg.methods[m], data, cfg.solver);
      } catch (const Error&) {
        threw[r * M + m] = 1;
      }
    }
  });

  SimReport report;
  report.config = cfg;
  for (std::size_t m = 0; m < M; ++m) {
    MethodReport mr;
    mr.method = cfg.methods[m];
    std::vector<LocationScatter> kept;
    for (std::size_t r = 0; r < R; ++r) {
      const Fit& f = fits[r * M + m];
      if (threw[r * M + m]) ++mr.failed;
      if (f.pd_corrected) ++mr.pd_corrected;
      if (f.ok) kept.push_back(f.est);
    }
    mr.converged = kept.size();
    mr.convergence_rate = static_cast<double>(kept.size()) / static_cast<double>(R);
    if (kept.empty()) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      mr.metrics = {nan, nan, nan, nan};
    } else {
      mr.metrics = bias_mse(kept, truth);
    }
    report.methods.push_back(std::move(mr));
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace smdpde
