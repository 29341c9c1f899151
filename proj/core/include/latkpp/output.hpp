#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace latkpp {

/// Shortest round-trip decimal representation with '.' as separator.
std::string format_number(double value);

/// RFC-4180 style CSV table: header row, quoted fields when needed.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row);
  void add_numeric_row(const std::vector<double>& row);

  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string csv_escape(std::string_view field);

/// Flat key/value report with sorted keys, one per line.
void write_report(const std::filesystem::path& path, const nlohmann::json& report);

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal line plot: axes box, tick labels at the extremes, one polyline per
/// series.
std::string render_svg(const std::vector<SvgSeries>& series, std::string_view title,
                       std::string_view x_label, std::string_view y_label);

}  // namespace latkpp
