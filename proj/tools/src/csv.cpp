#include "smdpde/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>

namespace smdpde::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<CsvRecord> parse_csv(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::vector<CsvRecord> out;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();

  while (i < n) {
    CsvRecord rec;
    rec.line = line;
    std::string field;
    bool field_quoted = false;
    bool end_of_record = false;
    while (!end_of_record) {
      if (i < n && text[i] == '"' && trim(field).empty()) {
        field.clear();
        field_quoted = true;
        ++i;
        bool closed = false;
        while (i < n) {
          const char c = text[i];
          if (c == '"') {
            if (i + 1 < n && text[i + 1] == '"') {
              field += '"';
              i += 2;
              continue;
            }
            ++i;
            closed = true;
            break;
          }
          if (c == '\n') ++line;
          field += c;
          ++i;
        }
        if (!closed) throw CsvError("unterminated quoted field", rec.line);
        while (i < n && (text[i] == ' ' || text[i] == '\t')) ++i;
        if (i < n && text[i] != ',' && text[i] != '\r' && text[i] != '\n') {
          throw CsvError("unexpected character after closing quote", line);
        }
      }
      if (i >= n) {
        end_of_record = true;
      } else if (text[i] == ',') {
        ++i;
      } else if (text[i] == '\r' || text[i] == '\n') {
        if (text[i] == '\r' && i + 1 < n && text[i + 1] == '\n') ++i;
        ++i;
        ++line;
        end_of_record = true;
      } else {
        if (field_quoted) throw CsvError("unexpected character after closing quote", line);
        field += text[i++];
        continue;
      }
      rec.fields.push_back(field_quoted ? field : trim(field));
      field.clear();
      field_quoted = false;
    }
    const bool blank = rec.fields.size() == 1 && rec.fields[0].empty();
    if (!blank) out.push_back(std::move(rec));
  }
  return out;
}

NumericTable read_numeric_csv(std::istream& in, bool header) {
  auto records = parse_csv(in);
  NumericTable t;
  std::size_t first = 0;
  if (header) {
    if (records.empty()) throw CsvError("missing header record", 1);
    t.names = records[0].fields;
    first = 1;
  }
  if (records.size() <= first) throw CsvError("no data rows", records.empty() ? 1 : records.back().line);
  const std::size_t width = header ? t.names.size() : records[first].fields.size();
  if (!header) {
    for (std::size_t j = 0; j < width; ++j) t.names.push_back(std::to_string(j + 1));
  }
  const std::size_t rows = records.size() - first;
  t.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& rec = records[first + r];
    if (rec.fields.size() != width) {
      throw CsvError("expected " + std::to_string(width) + " fields, found " +
                         std::to_string(rec.fields.size()),
                     rec.line);
    }
    for (std::size_t j = 0; j < width; ++j) {
      const std::string& f = rec.fields[j];
      double v = 0.0;
      const char* b = f.data();
      const char* e = f.data() + f.size();
      if (!f.empty() && *b == '+') ++b;
      const auto res = std::from_chars(b, e, v);
      if (f.empty() || res.ec != std::errc{} || res.ptr != e) {
        throw CsvError("field " + std::to_string(j + 1) + " is not a number: '" + f + "'",
                       rec.line);
      }
      if (!std::isfinite(v)) {
        throw CsvError("field " + std::to_string(j + 1) + " is not finite: '" + f + "'",
                       rec.line);
      }
      t.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return t;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) row += ',';
    row += csv_field(fields[i]);
  }
  row += "\r\n";
  return row;
}

}  // namespace smdpde::cli
