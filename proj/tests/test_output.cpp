#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "latkpp/output.hpp"

using namespace latkpp;

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(2.073444684205341), "2.073444684205341");
  EXPECT_EQ(format_number(-2.5e-12), "-2.5e-12");
  for (double v : {1.0 / 3.0, 6.02214076e23, 1e-300}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}

TEST(FormatNumber, NonFiniteValues) {
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Csv, EscapesOnlyWhenNeeded) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, TableUsesCrlfRowsAndHeader) {
  CsvTable t({"t", "value"});
  t.add_numeric_row({0.5, 2.0});
  t.add_row({"x,y", "z"});
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.str(), "t,value\r\n0.5,2\r\n\"x,y\",z\r\n");
}

TEST(Csv, RejectsRaggedRows) {
  CsvTable t({"a", "b"});
  EXPECT_ANY_THROW(t.add_row({"1"}));
}

TEST(Csv, WriteCreatesParentDirectories) {
  const auto dir = std::filesystem::temp_directory_path() / "latkpp_output_test";
  std::filesystem::remove_all(dir);
  CsvTable t({"a"});
  t.add_numeric_row({1.0});
  t.write(dir / "nested" / "a.csv");
  std::ifstream in(dir / "nested" / "a.csv", std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "a\r\n1\r\n");
  std::filesystem::remove_all(dir);
}

TEST(Report, KeysAreSortedAndParseBack) {
  const auto path = std::filesystem::temp_directory_path() / "latkpp_report_test.json";
  write_report(path, {{"zeta", 1}, {"alpha", 2.5}});
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  EXPECT_LT(text.find("alpha"), text.find("zeta"));
  EXPECT_EQ(nlohmann::json::parse(text)["alpha"], 2.5);
  std::filesystem::remove(path);
}

TEST(Svg, ContainsOnePolylinePerSeries) {
  const std::string svg = render_svg({{"a", {0, 1, 2}, {0, 1, 4}}, {"b", {0, 2}, {1, 1}}},
                                     "title & more", "t", "J");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  std::size_t count = 0;
  for (auto p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1))
    ++count;
  EXPECT_EQ(count, 2u);
  EXPECT_NE(svg.find("title &amp; more"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}
