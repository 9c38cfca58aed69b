#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace rdc {

/// CSV number format: `.` decimal separator regardless of locale,
/// scientific notation when |x| < 1e-3 or |x| > 1e6, fixed otherwise,
/// 12 significant digits. Zero prints as `0`.
std::string format_number(double x);
std::string format_integer(std::int64_t x);

/// Shortest text that parses back to exactly `x`.
std::string format_roundtrip(double x);

/// Strict full-string parse; throws std::invalid_argument on junk.
double parse_double(std::string_view text);
std::int64_t parse_integer(std::string_view text);

class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header);

  CsvWriter& row(std::vector<std::string> cells);
  std::string str() const;
  std::size_t size() const { return rows_.size(); }

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws std::out_of_range when missing.
  std::size_t column(std::string_view name) const;
};

/// Plain comma-separated text, no quoting. Blank lines are skipped.
CsvData parse_csv(std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace rdc
