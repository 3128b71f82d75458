#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smdpde/errors.hpp"

namespace smdpde::cli {

/// Malformed CSV input. `line()` is the 1-based physical line where the
/// offending record starts.
class CsvError : public ValidationError {
 public:
  CsvError(const std::string& what, std::size_t line)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// RFC 4180 records: comma separated, optional double-quoted fields with ""
/// escapes, CRLF or LF terminators, quoted fields may span lines. Blank
/// lines are skipped.
std::vector<CsvRecord> parse_csv(std::istream& in);

struct NumericTable {
  std::vector<std::string> names;
  Eigen::MatrixXd values;
};

/// Numeric matrix from CSV. With `header` the first record supplies column
/// names, otherwise columns are named "1", "2", ... Every record must have
/// the same width and every field must be a finite number.
NumericTable read_numeric_csv(std::istream& in, bool header);

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string csv_field(const std::string& s);

/// Joins fields into one CRLF-terminated record.
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace smdpde::cli
