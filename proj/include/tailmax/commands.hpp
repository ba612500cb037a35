#pragma once

// Subcommands behind the `tailmax` executable.  Each cmd_* writes its
// artifacts plus report.json into `out` and returns the report.
//
// Exit codes of cli_main:
//   0  success, every requested artifact written
//   1  unexpected internal error
//   2  usage error (unknown flag, invalid flag value)
//   3  data error (unreadable or malformed input)
//   4  estimation error (empty selection, degenerate sample, too short series)
//   5  output error (artifact could not be written)

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tailmax/gof.hpp"
#include "tailmax/report.hpp"
#include "tailmax/simulation.hpp"

namespace tailmax {

enum ExitCode : int { kExitOk = 0, kExitOther = 1, kExitUsage = 2, kExitData = 3, kExitEstimation = 4, kExitOutput = 5 };

class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimulateOptions {
  SimConfig config;
  std::filesystem::path out = ".";
  bool svg = true;
};

struct DataOptions {
  std::filesystem::path input;
  std::string col_x;
  std::string col_y;
  bool negate_returns = false;  // analyse gains instead of losses
};

struct EstimateOptions {
  DataOptions data;
  double q = 0.1;
  std::size_t m = 5;
  double theta = 1e-6;
  std::uint64_t seed = 0;
  std::vector<std::size_t> m_sweep;
  std::filesystem::path out = ".";
};

struct GofCommandOptions {
  DataOptions data;
  double q = 0.1;
  std::vector<Direction> directions{Direction::BelowIndependence};
  std::size_t resamples = 10000;
  double level = 0.95;
  std::uint64_t seed = 0;
  KsEvaluation ks = KsEvaluation::MemberPoints;
  NullScheme null = NullScheme::IidUniform;
  unsigned threads = 0;
  std::filesystem::path out = ".";
};

struct WhitenoiseOptions {
  DataOptions data;
  double q = 0.1;
  std::size_t max_lag = 20;
  std::filesystem::path out = ".";
};

struct SynthOptions {
  std::size_t rows = 5000;
  double gamma0 = 0.4;
  double gamma1 = 0.8;
  double phi = 0.6;
  std::size_t missing = 12;
  std::uint64_t seed = 0;
  std::filesystem::path out = "synthetic_prices.csv";
};

RunReport cmd_simulate(const SimulateOptions& options);
RunReport cmd_estimate(const EstimateOptions& options);
RunReport cmd_gof(const GofCommandOptions& options);
RunReport cmd_whitenoise(const WhitenoiseOptions& options);
/// Business-day price panel with columns A and B whose log-returns have a
/// generalized-Clayton copula in the joint-loss corner, plus a third
/// independent column C; `missing` cells are left empty.
RunReport cmd_synth(const SynthOptions& options);

int cli_main(int argc, char** argv);

}  // namespace tailmax
