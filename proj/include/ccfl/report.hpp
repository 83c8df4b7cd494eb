#ifndef CCFL_REPORT_HPP
#define CCFL_REPORT_HPP

// CSV tables and number formatting for the command-line tool. Doubles are
// written in shortest round-trip form, so every field parses back exactly.

#include <charconv>
#include <concepts>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

namespace ccfl {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, end);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size())
    throw std::invalid_argument("parse_double: '" + std::string(s) + "'");
  return v;
}

/// Minimal CSV table: a header and rows of pre-formatted cells. Cells never
/// contain commas (the tool only writes numbers and identifiers).
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  class Row {
  public:
    Row& add(double v) { return add_text(format_double(v)); }
    template <std::integral T>
      requires(!std::is_same_v<T, bool>)
    Row& add(T v) {
      return add_text(std::to_string(v));
    }
    Row& add(bool v) { return add_text(v ? "1" : "0"); }
    Row& add_text(std::string s) {
      cells_.push_back(std::move(s));
      return *this;
    }

  private:
    friend class CsvTable;
    std::vector<std::string> cells_;
  };

  Row& row() { return rows_.emplace_back(); }

  void write(std::ostream& out) const {
    write_line(out, header_);
    for (const auto& r : rows_) {
      if (r.cells_.size() != header_.size())
        throw std::logic_error("CsvTable: row width does not match header");
      write_line(out, r.cells_);
    }
  }

  std::size_t size() const noexcept { return rows_.size(); }

private:
  static void write_line(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out << ',';
      out << cells[k];
    }
    out << '\n';
  }

  std::vector<std::string> header_;
  std::vector<Row> rows_;
};

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace ccfl

#endif  // CCFL_REPORT_HPP
