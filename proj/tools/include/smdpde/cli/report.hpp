#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "smdpde/assembly.hpp"
#include "smdpde/influence.hpp"
#include "smdpde/simulation.hpp"

namespace smdpde::cli {

inline constexpr int kSchemaVersion = 1;

/// v rounded to 12 significant digits; JSON numbers are emitted this way.
double round12(double v);

/// JSON value for a number: rounded to 12 digits, null when not finite.
nlohmann::ordered_json json_number(double v);

/// Estimate report. Sigma_hat is assembled from the rounded sigma2_hat and
/// R_hat, so a reader can rebuild it from the emitted values.
nlohmann::ordered_json estimate_json(const LocationScatterEstimate& est, TuningBeta beta,
                             const std::vector<std::string>& columns, std::size_t rows,
                             PdPolicy policy);

nlohmann::ordered_json sim_report_json(const SimReport& report);

/// method,beta,bias_loc,mse_loc,bias_scatter,mse_scatter,conv_rate
std::string sim_report_csv(const SimReport& report);

/// y1,y2,if
std::string influence_csv(const InfluenceGrid& grid);

std::string to_string(PdPolicy p);

}  // namespace smdpde::cli
