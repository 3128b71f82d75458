#include "smdpde/cli/app.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "smdpde/asymptotics.hpp"
#include "smdpde/cli/config.hpp"
#include "smdpde/cli/csv.hpp"
#include "smdpde/cli/grid.hpp"
#include "smdpde/cli/report.hpp"
#include "smdpde/influence.hpp"

namespace smdpde::cli {

namespace {

struct EstimateArgs {
  std::string input;
  double beta = 0.5;
  PdPolicy pd_policy = PdPolicy::automatic;
  int threads = 0;
  bool header = false;
  std::string columns;
  std::string output;
  double tol = 1e-8;
  std::size_t max_iter = 500;
};

struct SimulateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string output;
  std::string json_output;
};

struct AreArgs {
  std::string betas = "0,0.1,0.3,0.5,0.7";
  std::string rhos = "-0.7..0.7";
  std::string table = "correlation";
  std::string output;
};

struct InfluenceArgs {
  std::string target = "correlation";
  double beta = 0.0;
  int component = 1;
  double mu1 = 1.0, mu2 = 4.0, var1 = 4.0, var2 = 9.0, rho = 0.5;
  std::string y1 = "-50:50:101";
  std::string y2 = "-50:50:101";
  std::string output;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw ValidationError("failed writing output file '" + path + "'");
}

std::vector<std::size_t> select_columns(const std::string& spec,
                                        const std::vector<std::string>& names) {
  std::vector<std::size_t> idx;
  if (spec.empty()) {
    for (std::size_t j = 0; j < names.size(); ++j) idx.push_back(j);
    return idx;
  }
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto it = std::find(names.begin(), names.end(), tok);
    if (it != names.end()) {
      idx.push_back(static_cast<std::size_t>(it - names.begin()));
      continue;
    }
    std::size_t pos = 0;
    long one_based = 0;
    try {
      one_based = std::stol(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size() || one_based < 1 || static_cast<std::size_t>(one_based) > names.size()) {
      throw ValidationError("--columns: unknown column '" + tok + "'");
    }
    idx.push_back(static_cast<std::size_t>(one_based - 1));
  }
  if (idx.empty()) throw ValidationError("--columns: no columns selected");
  return idx;
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  const TuningBeta beta(a.beta);
  std::ifstream in(a.input, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file '" + a.input + "'");
  NumericTable table = read_numeric_csv(in, a.header);
  const auto cols = select_columns(a.columns, table.names);
  Eigen::MatrixXd X(table.values.rows(), static_cast<Eigen::Index>(cols.size()));
  std::vector<std::string> names;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    X.col(static_cast<Eigen::Index>(c)) = table.values.col(static_cast<Eigen::Index>(cols[c]));
    names.push_back(table.names[cols[c]]);
  }
  const DataMatrix data(std::move(X));

  EstimateOptions opt;
  opt.pd_policy = a.pd_policy;
  opt.threads = a.threads;
  opt.solver.tol = a.tol;
  opt.solver.max_iter = a.max_iter;
  LocationScatterEstimate est;
  try {
    est = estimate(data, beta, opt);
  } catch (const DegenerateSampleError& e) {
    if (e.column() >= 0) {
      const auto j = static_cast<std::size_t>(e.column());
      throw DegenerateSampleError("column '" + names.at(j) + "' is constant", e.column());
    }
    throw;
  }
  emit(estimate_json(est, beta, names, data.n(), a.pd_policy).dump(2) + "\n", a.output, out);
  return kExitOk;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  ScenarioConfig cfg = load_scenario(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (a.threads) cfg.threads = *a.threads;
  const SimReport report = run_scenario(cfg);
  if (!a.json_output.empty()) emit(sim_report_json(report).dump(2) + "\n", a.json_output, out);
  emit(sim_report_csv(report), a.output, out);
  return kExitOk;
}

int cmd_are(const AreArgs& a, std::ostream& out) {
  const auto betas = parse_values(a.betas);
  const auto rhos = parse_values(a.rhos);
  if (betas.empty() || rhos.empty()) throw ValidationError("empty beta or rho grid");
  const AreTables t = are_tables(betas, rhos);
  emit(a.table == "marginal" ? marginal_are_csv(t) : correlation_are_csv(t), a.output, out);
  return kExitOk;
}

int cmd_influence(const InfluenceArgs& a, std::ostream& out) {
  static const std::map<std::string, InfluenceTarget> targets = {
      {"mean", InfluenceTarget::mean},
      {"variance", InfluenceTarget::variance},
      {"correlation", InfluenceTarget::correlation}};
  const TuningBeta beta(a.beta);
  const PairParams model{{a.mu1, a.var1}, {a.mu2, a.var2}, a.rho};
  require_positive_variance(a.var1);
  require_positive_variance(a.var2);
  require_open_correlation(a.rho);
  const auto ys = parse_axis(a.y1);
  const auto zs = parse_axis(a.y2);
  const auto target = targets.at(a.target);
  // Marginal targets read the grid of their own component.
  const auto& axis = (target != InfluenceTarget::correlation && a.component == 2) ? zs : ys;
  const InfluenceGrid g = influence_grid(target, a.component, model, beta, axis, zs);
  emit(influence_csv(g), a.output, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential minimum density power divergence estimation of location and scatter",
               "smdpde"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "smdpde 0.1.0");

  const std::map<std::string, PdPolicy> policies = {
      {"auto", PdPolicy::automatic}, {"always", PdPolicy::always}, {"never", PdPolicy::never}};

  EstimateArgs ea;
  auto* est = app.add_subcommand("estimate", "Estimate location and scatter from a CSV file");
  est->add_option("input", ea.input, "CSV file, one observation per row")->required();
  est->add_option("--beta", ea.beta, "DPD tuning parameter in [0,1]")->capture_default_str();
  est->add_option("--pd-policy", ea.pd_policy, "Correlation repair: auto, always or never")
      ->transform(CLI::CheckedTransformer(policies, CLI::ignore_case))
      ->default_str("auto");
  est->add_option("--threads", ea.threads, "Worker cap (0 = all available)")
      ->check(CLI::NonNegativeNumber);
  est->add_flag("--header", ea.header, "First CSV record holds column names");
  est->add_option("--columns", ea.columns, "Comma-separated column names or 1-based indices");
  est->add_option("--output,-o", ea.output, "JSON output path (default stdout)");
  est->add_option("--tol", ea.tol, "Solver tolerance")->capture_default_str();
  est->add_option("--max-iter", ea.max_iter, "Solver iteration cap")->capture_default_str();

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Run a Monte-Carlo scenario from a JSON config");
  sim->add_option("config", sa.config, "Scenario JSON file")->required();
  sim->add_option("--seed", sa.seed, "Override the scenario seed");
  sim->add_option("--threads", sa.threads, "Worker cap (0 = all available)")
      ->check(CLI::NonNegativeNumber);
  sim->add_option("--output,-o", sa.output, "CSV report path (default stdout)");
  sim->add_option("--json", sa.json_output, "JSON report path");

  auto* diag = app.add_subcommand("diagnose", "Analytic diagnostics");
  diag->require_subcommand(1);

  AreArgs aa;
  auto* are = diag->add_subcommand("are", "Asymptotic relative efficiencies versus the MLE");
  are->add_option("--betas", aa.betas, "Beta list or range")->capture_default_str();
  are->add_option("--rhos", aa.rhos, "Correlation list or range")->capture_default_str();
  are->add_option("--table", aa.table, "marginal or correlation")
      ->check(CLI::IsMember({"marginal", "correlation"}))
      ->capture_default_str();
  are->add_option("--output,-o", aa.output, "CSV output path (default stdout)");

  InfluenceArgs ia;
  auto* inf = diag->add_subcommand("influence", "Influence function on a grid");
  inf->add_option("--target", ia.target, "mean, variance or correlation")
      ->check(CLI::IsMember({"mean", "variance", "correlation"}))
      ->capture_default_str();
  inf->add_option("--beta", ia.beta, "DPD tuning parameter in [0,1]")->capture_default_str();
  inf->add_option("--component", ia.component, "Component (1 or 2) for marginal targets")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  inf->add_option("--mu1", ia.mu1)->capture_default_str();
  inf->add_option("--mu2", ia.mu2)->capture_default_str();
  inf->add_option("--var1", ia.var1)->capture_default_str();
  inf->add_option("--var2", ia.var2)->capture_default_str();
  inf->add_option("--rho", ia.rho)->capture_default_str();
  inf->add_option("--y1", ia.y1, "Grid lo:hi:count for the first coordinate")->capture_default_str();
  inf->add_option("--y2", ia.y2, "Grid lo:hi:count for the second coordinate")->capture_default_str();
  inf->add_option("--output,-o", ia.output, "CSV output path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*est) return cmd_estimate(ea, out);
    if (*sim) return cmd_simulate(sa, out);
    if (*are) return cmd_are(aa, out);
    if (*inf) return cmd_influence(ia, out);
  } catch (const DegenerateSampleError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace smdpde::cli
