#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// Minimal comma-separated table reader/writer. Fields never contain commas
// or quotes in any of the scenario formats; '#' lines are comments. Output
// uses '.' decimals, LF line endings, UTF-8.

namespace equiflow {

/// Parse or validation failure with a machine-readable location: file,
/// 1-based line (0 when not line-specific), and offending field path.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string file, int line, std::string field, std::string message)
      : std::runtime_error(Format(file, line, field, message)),
        file_(std::move(file)),
        line_(line),
        field_(std::move(field)) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  static std::string Format(const std::string& file, int line, const std::string& field,
                            const std::string& message) {
    std::string out = file;
    if (line > 0) out += ":" + std::to_string(line);
    if (!field.empty()) out += ": " + field;
    return out + ": " + message;
  }

  std::string file_;
  int line_;
  std::string field_;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

struct CsvTable {
  std::string path;  // short name, used in error messages
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;  // source line per data row

  int column(const std::string& name) const {
    for (int c = 0; c < static_cast<int>(columns.size()); ++c)
      if (columns[c] == name) return c;
    return -1;
  }

  int require_column(const std::string& name) const {
    const int c = column(name);
    if (c < 0) throw ValidationError(path, 0, name, "missing required column");
    return c;
  }

  const std::string& cell(std::size_t row, int col) const { return rows[row][col]; }
};

inline CsvTable read_csv(const std::string& full_path, const std::string& short_name) {
  std::ifstream in(full_path);
  if (!in) throw ValidationError(short_name, 0, "", "cannot open file");
  CsvTable table;
  table.path = short_name;
  std::string line;
  int line_number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(stripped);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!stripped.empty() && stripped.back() == ',') fields.push_back("");
    if (!header_seen) {
      table.columns = std::move(fields);
      header_seen = true;
      continue;
    }
    if (fields.size() != table.columns.size())
      throw ValidationError(short_name, line_number, "",
                            "expected " + std::to_string(table.columns.size()) +
                                " fields, got " + std::to_string(fields.size()));
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_number);
  }
  if (!header_seen) throw ValidationError(short_name, 0, "", "missing header row");
  return table;
}

inline double parse_double(const CsvTable& t, std::size_t row, int col) {
  const std::string& s = t.cell(row, col);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ValidationError(t.path, t.line_numbers[row], t.columns[col],
                          "not a number: '" + s + "'");
  return value;
}

inline int parse_int(const CsvTable& t, std::size_t row, int col) {
  const std::string& s = t.cell(row, col);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ValidationError(t.path, t.line_numbers[row], t.columns[col],
                          "not an integer: '" + s + "'");
  return value;
}

/// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, ptr);
}

}  // namespace detail
}  // namespace equiflow
