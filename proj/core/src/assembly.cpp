#include "smdpde/assembly.hpp"

#include <cmath>
#include <string>

#include "smdpde/parallel.hpp"

namespace smdpde {

DataMatrix::DataMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() < 2) throw ValidationError("data needs at least two rows");
  if (values_.cols() < 1) throw ValidationError("data needs at least one column");
  for (Eigen::Index j = 0; j < values_.cols(); ++j) {
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
      if (!std::isfinite(values_(i, j))) {
        throw ValidationError("non-finite value at row " + std::to_string(i + 1) +
                              ", column " + std::to_string(j + 1));
      }
    }
  }
}

bool LocationScatterEstimate::converged() const {
  for (const auto& m : per_component) {
    if (!m.converged) return false;
  }
  for (const auto& pr : per_pair) {
    if (!pr.fit.converged) return false;
  }
  return true;
}

Eigen::MatrixXd assemble_covariance(const Eigen::VectorXd& sigma2, const Eigen::MatrixXd& R) {
  const Eigen::VectorXd sd = sigma2.cwiseSqrt();
  return sd.asDiagonal() * R * sd.asDiagonal();
}

LocationScatterEstimate estimate(const DataMatrix& data, TuningBeta beta,
                                 const EstimateOptions& options) {
  options.solver.validate();
  const std::size_t p = data.p();

  LocationScatterEstimate out;
  out.per_component.resize(p);
  parallel_for(p, options.threads, [&](std::size_t j) {
    try {
      out.per_component[j] = fit_marginal(data.column(j), beta, options.solver);
    } catch (const DegenerateSampleError& e) {
      throw DegenerateSampleError("column " + std::to_string(j + 1) + ": " + e.what(),
                                  static_cast<long>(j));
    }
  });

  out.mu_hat.resize(static_cast<Eigen::Index>(p));
  out.sigma2_hat.resize(static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j) {
    out.mu_hat(static_cast<Eigen::Index>(j)) = out.per_component[j].params.mu;
    out.sigma2_hat(static_cast<Eigen::Index>(j)) = out.per_component[j].params.sigma2;
  }

  out.per_pair.reserve(p * (p - 1) / 2);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = j + 1; k < p; ++k) out.per_pair.push_back({j, k, {}});
  }
  parallel_for(out.per_pair.size(), options.threads, [&](std::size_t t) {
    auto& pr = out.per_pair[t];
    pr.fit = fit_correlation(data.column(pr.j), data.column(pr.k),
                             out.per_component[pr.j].params,
                             out.per_component[pr.k].params, beta, options.correlation);
  });

  Eigen::MatrixXd R = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p),
                                                static_cast<Eigen::Index>(p));
  for (const auto& pr : out.per_pair) {
    const auto j = static_cast<Eigen::Index>(pr.j);
    const auto k = static_cast<Eigen::Index>(pr.k);
    R(j, k) = pr.fit.rho;
    R(k, j) = pr.fit.rho;
  }

  switch (options.pd_policy) {
    case PdPolicy::never:
      break;
    case PdPolicy::always:
      R = nearest_pd(R, options.pd);
      out.pd_corrected = true;
      break;
    case PdPolicy::automatic:
      if (p > 1 && min_eigenvalue(R) < options.pd.eigen_floor) {
        R = nearest_pd(R, options.pd);
        out.pd_corrected = true;
      }
      break;
  }

  out.R_hat = std::move(R);
  out.Sigma_hat = assemble_covariance(out.sigma2_hat, out.R_hat);
  return out;
}

}  // namespace smdpde
