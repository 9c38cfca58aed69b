#include "rdc/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rdc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) return "0";
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const double mag = std::fabs(x);
  std::to_chars_result res;
  if (mag < 1e-3 || mag > 1e6) {
    res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::scientific, 11);
    // Drop trailing mantissa zeros so 8.61e-07 does not print as 8.61000000000e-07.
    std::string s(buf.data(), res.ptr);
    const auto e = s.find('e');
    auto end = e;
    while (s[end - 1] == '0') --end;
    if (s[end - 1] == '.') --end;
    return s.substr(0, end) + s.substr(e);
  } else {
    res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 12);
  }
  return std::string(buf.data(), res.ptr);
}

std::string format_integer(std::int64_t x) { return std::to_string(x); }

std::string format_roundtrip(double x) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::int64_t parse_integer(std::string_view text) {
  text = trim(text);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

CsvWriter& CsvWriter::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw std::logic_error("csv row has " + std::to_string(cells.size()) + " cells, header has " +
                           std::to_string(header_.size()));
  }
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvWriter::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

std::size_t CsvData::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("missing csv column '" + std::string(name) + "'");
}

CsvData parse_csv(std::string_view text) {
  CsvData data;
  bool have_header = false;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> cells;
    while (true) {
      auto comma = line.find(',');
      cells.emplace_back(trim(line.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (!have_header) {
      data.header = std::move(cells);
      have_header = true;
    } else {
      if (cells.size() != data.header.size()) {
        throw std::invalid_argument("csv row " + std::to_string(data.rows.size() + 1) + " has " +
                                    std::to_string(cells.size()) + " cells, expected " +
                                    std::to_string(data.header.size()));
      }
      data.rows.push_back(std::move(cells));
    }
  }
  return data;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace rdc
