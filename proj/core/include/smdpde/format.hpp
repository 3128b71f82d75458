#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace smdpde {

/// Shortest round-trippable-enough form with 12 significant digits, as used
/// for every emitted CSV/JSON number. Non-finite values print as "nan"/"inf".
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace smdpde
