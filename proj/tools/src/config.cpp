#include "smdpde/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>

namespace smdpde::cli {

namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError(where.empty() ? k : where + "." + k, "unknown key");
  }
}

std::string path(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

double number(const json& obj, const std::string& where, const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path(where, key), "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path(where, key), "must be finite");
  return d;
}

std::size_t count(const json& obj, const std::string& where, const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(path(where, key), "must be an integer");
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  const auto i = v.get<long long>();
  if (i < 0) throw ConfigError(path(where, key), "must be non-negative");
  return static_cast<std::size_t>(i);
}

std::string kind_of(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_object() && v.contains("kind") && v.at("kind").is_string()) {
    return v.at("kind").get<std::string>();
  }
  throw ConfigError(key, "must be a string or an object with a \"kind\" string");
}

void parse_sigma(const json& v, ScenarioConfig& cfg) {
  const std::string kind = kind_of(v, "sigma");
  if (kind == "identity") {
    if (v.is_object()) only_keys(v, "sigma", {"kind"});
    cfg.sigma_kind = SigmaKind::identity;
  } else if (kind == "block_banded") {
    cfg.sigma_kind = SigmaKind::block_banded;
    if (v.is_object()) {
      only_keys(v, "sigma", {"kind", "rho"});
      if (v.contains("rho")) cfg.banded_rho = number(v, "sigma", "rho");
    }
  } else if (kind == "custom") {
    cfg.sigma_kind = SigmaKind::custom;
    if (!v.is_object() || !v.contains("matrix")) throw ConfigError("sigma.matrix", "required for custom");
    only_keys(v, "sigma", {"kind", "matrix"});
    const auto& m = v.at("matrix");
    if (!m.is_array() || m.empty()) throw ConfigError("sigma.matrix", "must be a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(m.size());
    cfg.custom_sigma.resize(rows, rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const auto& row = m.at(static_cast<std::size_t>(i));
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
        throw ConfigError("sigma.matrix", "must be square");
      }
      for (Eigen::Index k = 0; k < rows; ++k) {
        const auto& e = row.at(static_cast<std::size_t>(k));
        if (!e.is_number()) throw ConfigError("sigma.matrix", "entries must be numbers");
        cfg.custom_sigma(i, k) = e.get<double>();
      }
    }
  } else {
    throw ConfigError("sigma", "unknown kind '" + kind + "'");
  }
}

void parse_contamination(const json& v, ScenarioConfig& cfg) {
  const std::string kind = kind_of(v, "contamination");
  const std::string w = "contamination";
  if (kind == "none") {
    if (v.is_object()) only_keys(v, w, {"kind"});
    cfg.contamination = ContaminationKind::none;
  } else if (kind == "casewise") {
    cfg.contamination = ContaminationKind::casewise;
    if (v.is_object()) {
      only_keys(v, w, {"kind", "eps", "shift"});
      if (v.contains("eps")) cfg.eps = number(v, w, "eps");
      if (v.contains("shift")) cfg.shift = number(v, w, "shift");
    }
  } else if (kind == "cellwise") {
    cfg.contamination = ContaminationKind::cellwise;
    cfg.shift = 5.0;
    if (v.is_object()) {
      only_keys(v, w, {"kind", "clean_count", "per_axis_count", "shift"});
      if (v.contains("clean_count")) cfg.clean_count = count(v, w, "clean_count");
      if (v.contains("per_axis_count")) cfg.per_axis_count = count(v, w, "per_axis_count");
      if (v.contains("shift")) cfg.shift = number(v, w, "shift");
    }
  } else {
    throw ConfigError(w, "unknown kind '" + kind + "'");
  }
}

MethodKind method_kind(const std::string& name, const std::string& key) {
  if (name == "mle") return MethodKind::mle;
  if (name == "smdpde") return MethodKind::smdpde;
  if (name == "mdpde") return MethodKind::mdpde;
  throw ConfigError(key, "unknown method '" + name + "'");
}

void parse_methods(const json& v, ScenarioConfig& cfg) {
  if (!v.is_array()) throw ConfigError("methods", "must be an array");
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string key = "methods[" + std::to_string(i) + "]";
    const auto& m = v[i];
    if (m.is_string()) {
      const auto kind = method_kind(m.get<std::string>(), key);
      if (kind != MethodKind::mle) throw ConfigError(key, "needs a beta");
      cfg.methods.push_back({kind, 0.0});
      continue;
    }
    if (!m.is_object() || !m.contains("method") || !m.at("method").is_string()) {
      throw ConfigError(key, "must be a name or an object with a \"method\" string");
    }
    only_keys(m, key, {"method", "beta", "betas"});
    const auto kind = method_kind(m.at("method").get<std::string>(), key + ".method");
    std::vector<double> betas;
    if (m.contains("beta")) betas.push_back(number(m, key, "beta"));
    if (m.contains("betas")) {
      const auto& b = m.at("betas");
      if (!b.is_array() || b.empty()) throw ConfigError(key + ".betas", "must be a non-empty array");
      for (const auto& e : b) {
        if (!e.is_number()) throw ConfigError(key + ".betas", "entries must be numbers");
        betas.push_back(e.get<double>());
      }
    }
    if (betas.empty()) {
      if (kind != MethodKind::mle) throw ConfigError(key, "needs a beta");
      betas.push_back(0.0);
    }
    for (double beta : betas) {
      if (!(beta >= 0.0 && beta <= 1.0)) {
        throw ConfigError(key + ".beta", "must lie in the range [0,1]");
      }
      cfg.methods.push_back({kind, kind == MethodKind::mle ? 0.0 : beta});
    }
  }
}

}  // namespace

ScenarioConfig parse_scenario(const json& j) {
  if (!j.is_object()) throw ConfigError("(root)", "scenario must be a JSON object");
  only_keys(j, "", {"n", "p", "sigma", "contamination", "replications", "seed", "methods",
                    "solver", "threads"});
  ScenarioConfig cfg;
  for (const char* req : {"p", "replications", "seed", "methods"}) {
    if (!j.contains(req)) throw ConfigError(req, "required");
  }
  if (j.contains("n")) cfg.n = count(j, "", "n");
  cfg.p = count(j, "", "p");
  cfg.replications = count(j, "", "replications");
  const auto& seed = j.at("seed");
  if (!seed.is_number_integer()) throw ConfigError("seed", "must be an integer");
  cfg.seed = seed.is_number_unsigned() ? seed.get<std::uint64_t>()
                                       : static_cast<std::uint64_t>(seed.get<std::int64_t>());
  if (j.contains("sigma")) parse_sigma(j.at("sigma"), cfg);
  if (j.contains("contamination")) parse_contamination(j.at("contamination"), cfg);
  parse_methods(j.at("methods"), cfg);
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    if (!s.is_object()) throw ConfigError("solver", "must be an object");
    only_keys(s, "solver", {"tol", "max_iter"});
    if (s.contains("tol")) cfg.solver.tol = number(s, "solver", "tol");
    if (s.contains("max_iter")) cfg.solver.max_iter = count(s, "solver", "max_iter");
  }
  if (j.contains("threads")) cfg.threads = static_cast<int>(count(j, "", "threads"));
  if (!j.contains("n") && cfg.contamination != ContaminationKind::cellwise) {
    throw ConfigError("n", "required");
  }
  if (cfg.contamination == ContaminationKind::cellwise) cfg.n = cfg.rows();

  try {
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    // validate() messages start with the field name.
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    if (colon == std::string::npos) throw ConfigError("solver", msg);
    throw ConfigError(msg.substr(0, colon), msg.substr(colon + 2));
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open scenario file '" + file + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("scenario file '" + file + "' is not valid JSON: " + e.what());
  }
  return parse_scenario(j);
}

}  // namespace smdpde::cli
