#pragma once

#include <string>

#include <json.hpp>

#include "smdpde/errors.hpp"
#include "smdpde/simulation.hpp"

namespace smdpde::cli {

/// Invalid scenario file. `key()` is the dotted path of the offending entry.
class ConfigError : public ValidationError {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : ValidationError(key + ": " + what), key_(key) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Scenario from a JSON object:
///
///   {
///     "n": 1000, "p": 5, "replications": 20, "seed": 7,
///     "sigma": "identity" | {"kind": "block_banded", "rho": 0.7}
///                         | {"kind": "custom", "matrix": [[...], ...]},
///     "contamination": "none"
///                    | {"kind": "casewise", "eps": 0.1, "shift": 20}
///                    | {"kind": "cellwise", "clean_count": 600,
///                       "per_axis_count": 100, "shift": 5},
///     "methods": ["mle", {"method": "smdpde", "beta": 0.1},
///                 {"method": "mdpde", "betas": [0.1, 0.5]}],
///     "solver": {"tol": 1e-8, "max_iter": 500},
///     "threads": 0
///   }
///
/// "seed" is required. Unknown keys are rejected.
ScenarioConfig parse_scenario(const nlohmann::json& j);

/// Reads and parses a scenario file.
ScenarioConfig load_scenario(const std::string& path);

}  // namespace smdpde::cli
