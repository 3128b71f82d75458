#include "smdpde/cli/report.hpp"

#include <cmath>

#include "smdpde/cli/csv.hpp"
#include "smdpde/format.hpp"

namespace smdpde::cli {

using json = nlohmann::ordered_json;

double round12(double v) {
  if (!std::isfinite(v)) return v;
  return std::stod(format_number(v)) + 0.0;
}

json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round12(v);
}

namespace {

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(json_number(v(i)));
  return a;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(json_number(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd rounded(const Eigen::MatrixXd& m) {
  return m.unaryExpr([](double v) { return round12(v); });
}

const char* sigma_name(SigmaKind k) {
  switch (k) {
    case SigmaKind::identity: return "identity";
    case SigmaKind::block_banded: return "block_banded";
    case SigmaKind::custom: return "custom";
  }
  return "unknown";
}

json contamination_json(const ScenarioConfig& c) {
  switch (c.contamination) {
    case ContaminationKind::none:
      return {{"kind", "none"}};
    case ContaminationKind::casewise:
      return {{"kind", "casewise"}, {"eps", json_number(c.eps)}, {"shift", json_number(c.shift)}};
    case ContaminationKind::cellwise:
      return {{"kind", "cellwise"},
              {"clean_count", c.clean_count},
              {"per_axis_count", c.per_axis_count},
              {"shift", json_number(c.shift)}};
  }
  return nullptr;
}

}  // namespace

std::string to_string(PdPolicy p) {
  switch (p) {
    case PdPolicy::automatic: return "auto";
    case PdPolicy::always: return "always";
    case PdPolicy::never: return "never";
  }
  return "unknown";
}

json estimate_json(const LocationScatterEstimate& est, TuningBeta beta,
                   const std::vector<std::string>& columns, std::size_t rows, PdPolicy policy) {
  const Eigen::VectorXd s2 = rounded(est.sigma2_hat);
  const Eigen::MatrixXd R = rounded(est.R_hat);
  const Eigen::MatrixXd Sigma = assemble_covariance(s2, R);

  json marginals = json::array();
  for (std::size_t j = 0; j < est.per_component.size(); ++j) {
    const auto& m = est.per_component[j];
    marginals.push_back({{"column", columns.at(j)},
                         {"iterations", m.iterations},
                         {"converged", m.converged},
                         {"final_step_norm", json_number(m.final_step_norm)},
                         {"halvings", m.halvings}});
  }
  json pairs = json::array();
  for (const auto& pr : est.per_pair) {
    pairs.push_back({{"j", pr.j},
                     {"k", pr.k},
                     {"rho", json_number(pr.fit.rho)},
                     {"evaluations", pr.fit.evaluations},
                     {"converged", pr.fit.converged},
                     {"at_boundary", pr.fit.at_boundary}});
  }
  return {{"schema_version", kSchemaVersion},
          {"beta", beta.value()},
          {"n", rows},
          {"p", est.p()},
          {"columns", columns},
          {"pd_policy", to_string(policy)},
          {"mu_hat", vector_json(est.mu_hat)},
          {"sigma2_hat", vector_json(s2)},
          {"R_hat", matrix_json(R)},
          {"Sigma_hat", matrix_json(Sigma)},
          {"pd_corrected", est.pd_corrected},
          {"converged", est.converged()},
          {"marginal_fits", std::move(marginals)},
          {"pair_fits", std::move(pairs)}};
}

json sim_report_json(const SimReport& r) {
  const auto& c = r.config;
  json methods = json::array();
  for (const auto& m : r.methods) {
    methods.push_back({{"method", m.method.name()},
                       {"beta", m.method.beta},
                       {"bias_location", json_number(m.metrics.bias_location)},
                       {"mse_location", json_number(m.metrics.mse_location)},
                       {"bias_scatter", json_number(m.metrics.bias_scatter)},
                       {"mse_scatter", json_number(m.metrics.mse_scatter)},
                       {"convergence_rate", json_number(m.convergence_rate)},
                       {"converged", m.converged},
                       {"failed", m.failed},
                       {"pd_corrected", m.pd_corrected}});
  }
  json sigma = {{"kind", sigma_name(c.sigma_kind)}};
  if (c.sigma_kind == SigmaKind::block_banded) sigma["rho"] = json_number(c.banded_rho);
  if (c.sigma_kind == SigmaKind::custom) sigma["matrix"] = matrix_json(c.custom_sigma);
  json config = {{"n", c.rows()},
                 {"p", c.p},
                 {"sigma", std::move(sigma)},
                 {"contamination", contamination_json(c)},
                 {"replications", c.replications},
                 {"seed", c.seed},
                 {"solver", {{"tol", c.solver.tol}, {"max_iter", c.solver.max_iter}}}};
  return {{"schema_version", kSchemaVersion},
          {"config", std::move(config)},
          {"methods", std::move(methods)},
          {"comparators_not_included", {"MCD", "MVE", "GK", "MM", "S"}},
          {"wall_seconds", json_number(r.wall_seconds)}};
}

std::string sim_report_csv(const SimReport& r) {
  std::string out = csv_row({"method", "beta", "bias_loc", "mse_loc", "bias_scatter",
                             "mse_scatter", "conv_rate"});
  for (const auto& m : r.methods) {
    out += csv_row({m.method.name(), format_number(m.method.beta),
                    format_number(m.metrics.bias_location), format_number(m.metrics.mse_location),
                    format_number(m.metrics.bias_scatter), format_number(m.metrics.mse_scatter),
                    format_number(m.convergence_rate)});
  }
  return out;
}

std::string influence_csv(const InfluenceGrid& g) {
  std::string out = csv_row({"y1", "y2", "if"});
  for (const auto& pt : g.points) {
    out += csv_row({format_number(pt.y1), format_number(pt.y2), format_number(pt.value)});
  }
  return out;
}

}  // namespace smdpde::cli
