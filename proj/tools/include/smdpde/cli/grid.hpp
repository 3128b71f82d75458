#pragma once

#include <string>
#include <vector>

namespace smdpde::cli {

/// Default correlation grid for efficiency tables.
inline const std::vector<double> kStandardRhos = {-0.7, -0.5, -0.3, 0.0, 0.3, 0.5, 0.7};

/// Number list. Accepted forms:
///   "0,0.1,0.3"     explicit values
///   "a..b:step"     a, a+step, ... up to b (inclusive, within 1e-9 step)
///   "a..b"          the standard correlation grid restricted to [a, b]
/// Throws ValidationError on malformed input.
std::vector<double> parse_values(const std::string& text);

/// "lo:hi:count" -> count equispaced points from lo to hi inclusive.
/// count = 0 yields an empty grid; count = 1 yields {lo}.
std::vector<double> parse_axis(const std::string& text);

/// Strict double parse of a whole token.
double parse_double(const std::string& token);

}  // namespace smdpde::cli
