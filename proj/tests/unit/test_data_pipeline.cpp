#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "tailmax/data_pipeline.hpp"

using namespace tailmax;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "tailmax_pipeline_tests";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

RawSeries series(std::string name, std::vector<std::pair<std::string, std::optional<double>>> obs) {
  RawSeries s{std::move(name), {}};
  for (auto& [d, v] : obs) s.observations.push_back({parse_date(d), v});
  return s;
}

}  // namespace

TEST(Dates, ParseAndFormat) {
  EXPECT_EQ(format_date(parse_date("2020-02-29")), "2020-02-29");
  EXPECT_EQ(format_date(parse_date(" 1999-12-31 ")), "1999-12-31");
  EXPECT_THROW(parse_date("2021-02-29"), DataError);
  EXPECT_THROW(parse_date("2021/01/02"), DataError);
  EXPECT_THROW(parse_date("21-01-02"), DataError);
  EXPECT_THROW(parse_date("2021-13-01"), DataError);
}

TEST(Csv, Rfc4180Fields) {
  const auto rows = parse_csv("a,\"b,c\",\"d\"\"e\"\r\n1,\"line\nbreak\",\r\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"a", "b,c", "d\"e"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"1", "line\nbreak", ""}));
  EXPECT_THROW(parse_csv("a,\"open\n"), DataError);
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(LoadCsv, EmptyCellIsMissing) {
  const auto p = write_temp("missing.csv", "date,A,B\n2020-01-01,100,5\n2020-01-02,,6\n2020-01-03,99,7\n");
  const auto s = load_csv(p);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].name, "A");
  ASSERT_EQ(s[0].observations.size(), 3u);
  EXPECT_FALSE(s[0].observations[1].value.has_value());
  EXPECT_DOUBLE_EQ(*s[0].observations[2].value, 99.0);
  EXPECT_DOUBLE_EQ(*s[1].observations[1].value, 6.0);
}

TEST(LoadCsv, ThreeValues) {
  const auto p = write_temp("three.csv", "date,P\n2020-01-01,100\n2020-01-02,110\n2020-01-03,99\n");
  const auto s = load_csv(p, {"P"});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].observations.size(), 3u);
}

TEST(LoadCsv, SortsByDateAndHonoursMissingTokens) {
  const auto p = write_temp("unsorted.csv", "P,date\n3,2020-01-03\n1,2020-01-01\nNA,2020-01-02\n");
  const auto s = load_csv(p, {}, {"", "NA"});
  EXPECT_EQ(format_date(s[0].observations[0].date), "2020-01-01");
  EXPECT_FALSE(s[0].observations[1].value.has_value());
  EXPECT_DOUBLE_EQ(*s[0].observations[2].value, 3.0);
}

TEST(LoadCsv, Errors) {
  const auto dup = write_temp("dup.csv", "date,P\n2020-01-01,1\n2020-01-02,2\n2020-01-01,3\n");
  try {
    load_csv(dup);
    FAIL() << "duplicate date accepted";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("2020-01-01"), std::string::npos);
  }
  EXPECT_THROW(load_csv(write_temp("bad_date.csv", "date,P\n2020-14-01,1\n")), DataError);
  EXPECT_THROW(load_csv(write_temp("bad_num.csv", "date,P\n2020-01-01,abc\n")), DataError);
  EXPECT_THROW(load_csv(write_temp("no_date.csv", "day,P\n2020-01-01,1\n")), DataError);
  EXPECT_THROW(load_csv(write_temp("ragged.csv", "date,P\n2020-01-01,1,2\n")), DataError);
  EXPECT_THROW(load_csv(write_temp("ok.csv", "date,P\n2020-01-01,1\n"), {"Q"}), DataError);
  EXPECT_THROW(load_csv("/nonexistent/file.csv"), DataError);
}

TEST(AlignAndLogDiff, SingleSeries) {
  const auto panel = align_and_log_diff({series("P", {{"2020-01-01", 100.0}, {"2020-01-02", 110.0}})});
  ASSERT_EQ(panel.size(), 1u);
  EXPECT_NEAR(panel.column("P")[0], 0.09531017980432486, 1e-15);
  EXPECT_EQ(format_date(panel.dates[0]), "2020-01-02");
}

TEST(AlignAndLogDiff, GapSpanningReturn) {
  const auto a = series("A", {{"2020-01-01", 100.0}, {"2020-01-02", 105.0}, {"2020-01-03", 110.0}});
  const auto b = series("B", {{"2020-01-01", 10.0}, {"2020-01-02", std::nullopt}, {"2020-01-03", 12.0}});
  const auto panel = align_and_log_diff({a, b});
  ASSERT_EQ(panel.size(), 1u);
  EXPECT_NEAR(panel.column("A")[0], std::log(1.1), 1e-15);
  EXPECT_NEAR(panel.column("B")[0], std::log(1.2), 1e-15);
}

TEST(AlignAndLogDiff, IntersectsDates) {
  const auto a = series("A", {{"2020-01-01", 1.0}, {"2020-01-02", 2.0}, {"2020-01-03", 4.0}});
  const auto b = series("B", {{"2020-01-02", 3.0}, {"2020-01-03", 6.0}, {"2020-01-04", 9.0}});
  const auto panel = align_and_log_diff({a, b});
  ASSERT_EQ(panel.size(), 1u);
  EXPECT_NEAR(panel.column("A")[0], std::log(2.0), 1e-15);
  EXPECT_NEAR(panel.column("B")[0], std::log(2.0), 1e-15);
}

TEST(AlignAndLogDiff, ConstantAndGeometric) {
  const auto c = align_and_log_diff({series("C", {{"2020-01-01", 5.0}, {"2020-01-02", 5.0}, {"2020-01-03", 5.0}})});
  EXPECT_EQ(c.column("C"), (std::vector<double>{0.0, 0.0}));
  RawSeries g{"G", {}};
  Day d = parse_date("2021-03-01");
  double v = 3.0;
  for (int i = 0; i < 20; ++i, v *= 1.07, d += std::chrono::days{1}) g.observations.push_back({d, v});
  const auto panel = align_and_log_diff({g});
  for (double r : panel.column("G")) EXPECT_NEAR(r, std::log(1.07), 1e-13);
}

TEST(AlignAndLogDiff, Errors) {
  EXPECT_THROW(align_and_log_diff({}), DataError);
  EXPECT_THROW(align_and_log_diff({series("P", {{"2020-01-01", 1.0}})}), DataError);
  EXPECT_THROW(align_and_log_diff({series("P", {{"2020-01-01", 1.0}, {"2020-01-02", 0.0}})}), DataError);
  EXPECT_THROW(align_and_log_diff({series("P", {{"2020-01-01", 1.0}, {"2020-01-02", std::nullopt}})}), DataError);
}

TEST(PanelCsv, TwelveSignificantDigits) {
  const auto panel = align_and_log_diff({series("P", {{"2020-01-01", 100.0}, {"2020-01-02", 110.0}})});
  const auto dir = fs::temp_directory_path() / "tailmax_pipeline_tests";
  write_panel_csv(panel, dir / "panel.csv");
  std::ifstream in(dir / "panel.csv", std::ios::binary);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, "date,P\r\n2020-01-02,0.0953101798043\r\n");
}
