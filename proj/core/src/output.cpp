#include "latkpp/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "latkpp/errors.hpp"

namespace latkpp {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buffer, end);
}

std::string csv_escape(std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) {
    throw ValidationError("csv row has " + std::to_string(row.size()) + " fields, header has " +
                          std::to_string(header_.size()));
  }
  rows_.push_back(std::move(row));
}

void CsvTable::add_numeric_row(const std::vector<double>& row) {
  std::vector<std::string> fields;
  fields.reserve(row.size());
  for (double v : row) fields.push_back(format_number(v));
  add_row(std::move(fields));
}

std::string CsvTable::str() const {
  std::string out;
  auto append_line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(fields[i]);
    }
    out += "\r\n";
  };
  append_line(header_);
  for (const auto& row : rows_) append_line(row);
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out << str();
}

void write_report(const std::filesystem::path& path, const nlohmann::json& report) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  // nlohmann::json objects are std::map backed, so keys come out sorted.
  out << report.dump(2) << '\n';
}

namespace {

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<SvgSeries>& series, std::string_view title,
                       std::string_view x_label, std::string_view y_label) {
  constexpr double width = 640.0, height = 400.0, pad = 50.0;
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& s : series) {
    for (double x : s.x) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
    }
    for (double y : s.y) {
      if (!std::isfinite(y)) continue;
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (!(x_max > x_min)) x_max = x_min + 1.0;
  if (!(y_max > y_min)) y_max = y_min + 1.0;
  auto px = [&](double x) { return pad + (x - x_min) / (x_max - x_min) * (width - 2 * pad); };
  auto py = [&](double y) {
    return height - pad - (y - y_min) / (y_max - y_min) * (height - 2 * pad);
  };

  static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                            "#9467bd", "#ff7f0e", "#17becf"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  svg << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << width - 2 * pad
      << "\" height=\"" << height - 2 * pad << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"" << pad / 2
      << "\" text-anchor=\"middle\">" << xml_escape(title) << "</text>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n";
  svg << "<text x=\"12\" y=\"" << height / 2 << "\" transform=\"rotate(-90 12 " << height / 2
      << ")\" text-anchor=\"middle\">" << xml_escape(y_label) << "</text>\n";
  svg << "<text x=\"" << pad << "\" y=\"" << height - pad + 15 << "\">"
      << format_number(x_min) << "</text>\n";
  svg << "<text x=\"" << width - pad << "\" y=\"" << height - pad + 15
      << "\" text-anchor=\"end\">" << format_number(x_max) << "</text>\n";
  svg << "<text x=\"" << pad - 4 << "\" y=\"" << height - pad << "\" text-anchor=\"end\">"
      << format_number(y_min) << "</text>\n";
  svg << "<text x=\"" << pad - 4 << "\" y=\"" << pad + 10 << "\" text-anchor=\"end\">"
      << format_number(y_max) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = palette[k % std::size(palette)];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" points=\"";
    std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.y[i])) continue;
      svg << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << width - pad - 4 << "\" y=\"" << pad + 16 * (k + 1)
        << "\" text-anchor=\"end\" fill=\"" << colour << "\">" << xml_escape(s.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace latkpp
