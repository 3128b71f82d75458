#include "smdpde/cli/grid.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "smdpde/errors.hpp"
#include "smdpde/format.hpp"

namespace smdpde::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

double parse_double(const std::string& token) {
  std::size_t b = token.find_first_not_of(" \t");
  std::size_t e = token.find_last_not_of(" \t");
  if (b == std::string::npos) throw ValidationError("empty number");
  const char* first = token.data() + b;
  const char* last = token.data() + e + 1;
  if (*first == '+') ++first;
  double v = 0.0;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v)) {
    throw ValidationError("not a finite number: '" + token + "'");
  }
  return v;
}

std::vector<double> parse_values(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    std::vector<double> out;
    for (const auto& t : split(text, ',')) out.push_back(parse_double(t));
    return out;
  }
  const double lo = parse_double(text.substr(0, dots));
  std::string rest = text.substr(dots + 2);
  const auto colon = rest.find(':');
  const double hi = parse_double(rest.substr(0, colon));
  if (hi < lo) throw ValidationError("range end below start: '" + text + "'");
  std::vector<double> out;
  if (colon == std::string::npos) {
    for (double r : kStandardRhos) {
      if (r >= lo - 1e-12 && r <= hi + 1e-12) out.push_back(r);
    }
    return out;
  }
  const double step = parse_double(rest.substr(colon + 1));
  if (!(step > 0.0)) throw ValidationError("range step must be positive: '" + text + "'");
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 100000) throw ValidationError("range has too many points: '" + text + "'");
  for (long i = 0; i < count; ++i) {
    const double v = lo + static_cast<double>(i) * step;
    // Drop accumulated rounding so that -0.7..0.7:0.1 hits -0.5, 0, 0.5 exactly.
    const double r = std::round(v / step * 1e6) / 1e6 * step;
    out.push_back(std::stod(format_number(r)) + 0.0);
  }
  return out;
}

std::vector<double> parse_axis(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ValidationError("grid must look like lo:hi:count, got '" + text + "'");
  const double lo = parse_double(parts[0]);
  const double hi = parse_double(parts[1]);
  const double c = parse_double(parts[2]);
  if (c < 0.0 || c != std::floor(c) || c > 1e6) {
    throw ValidationError("grid count must be a non-negative integer, got '" + parts[2] + "'");
  }
  if (hi < lo) throw ValidationError("grid end below start: '" + text + "'");
  const auto count = static_cast<std::size_t>(c);
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

}  // namespace smdpde::cli
