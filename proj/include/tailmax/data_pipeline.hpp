#pragma once

// CSV ingestion, date alignment and log-differencing of price series.

#include <chrono>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tailmax {

using Day = std::chrono::sys_days;

/// Raised for unreadable or malformed input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Observation {
  Day date;
  std::optional<double> value;  // empty cell -> nullopt
};

struct RawSeries {
  std::string name;
  std::vector<Observation> observations;  // strictly increasing dates
};

struct AlignedPanel {
  std::vector<Day> dates;  // date of each return (the later of the two days)
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  std::size_t size() const noexcept { return dates.size(); }
  const std::vector<double>& column(std::string_view name) const;
};

/// ISO-8601 calendar date (YYYY-MM-DD).  Throws DataError.
Day parse_date(std::string_view text);
std::string format_date(Day day);

/// RFC-4180 records of a whole document; quoted fields may hold commas,
/// doubled quotes and line breaks.  Throws DataError on an unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// RFC-4180 field quoting, applied only when needed.
std::string csv_field(std::string_view text);

/// One RawSeries per requested column (all non-date columns when `columns`
/// is empty), sorted by date.  Cells matching a `missing_tokens` entry (after
/// trimming) are missing.
std::vector<RawSeries> load_csv(const std::filesystem::path& path, const std::vector<std::string>& columns = {},
                                const std::vector<std::string>& missing_tokens = {""});

/// Intersect dates, drop rows with any missing value, then take first
/// differences of logs between surviving consecutive rows.
AlignedPanel align_and_log_diff(const std::vector<RawSeries>& series);

/// `date` plus one column per series, 12 significant digits.
void write_panel_csv(const AlignedPanel& panel, const std::filesystem::path& path);

}  // namespace tailmax
