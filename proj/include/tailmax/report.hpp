#pragma once

// Run reports and the plain-text artifacts written by the CLI.

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace tailmax {

using Json = nlohmann::ordered_json;

/// Raised when an artifact cannot be written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunReport {
  std::string command;
  Json parameters = Json::object();
  std::map<std::string, std::string> outputs;  // artifact name -> path
  double timing_seconds = 0.0;
  std::uint64_t seed = 0;
};

Json to_json(const RunReport& report);

/// Shortest round-trip decimal form.
std::string format_double(double x);

/// Pretty JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const Json& document);
void write_text(const std::filesystem::path& path, const std::string& text);

struct Histogram {
  double lower = 0.0;
  double bin_width = 1.0;
  std::vector<std::size_t> counts;
};

inline constexpr std::size_t kHistogramBins = 30;

/// Equal-width bins spanning [min, max]; the maximum lands in the last bin.
/// A constant sample gets a unit-width window centred on its value.
Histogram make_histogram(std::span<const double> values, std::size_t bins = kHistogramBins);

/// bin,lower,upper,count,density rows.
std::string histogram_csv(const Histogram& histogram, std::size_t total);

/// Bars scaled to density with a normal curve from the sample mean and SD
/// (curve omitted when the SD is unavailable).
std::string histogram_svg(const Histogram& histogram, std::size_t total, double mean, double stdev,
                          const std::string& title);

}  // namespace tailmax
