#include "tailmax/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "tailmax/data_pipeline.hpp"
#include "tailmax/empirical_tail.hpp"
#include "tailmax/estimators.hpp"
#include "tailmax/numeric.hpp"
#include "tailmax/portmanteau.hpp"
#include "tailmax/rng.hpp"

namespace tailmax {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw OutputError("cannot create output directory '" + dir.string() + "'");
}

// Writes `text` to out/name and records it under `key`.
void emit(RunReport& report, const fs::path& dir, const std::string& key, const std::string& name,
          const std::string& text) {
  write_text(dir / name, text);
  report.outputs[key] = name;
}

void emit_json(RunReport& report, const fs::path& dir, const std::string& key, const std::string& name,
               const Json& doc) {
  emit(report, dir, key, name, doc.dump(2) + "\n");
}

void finish(RunReport& report, const fs::path& dir, Clock::time_point start) {
  report.outputs["report"] = "report.json";
  report.timing_seconds = seconds_since(start);
  write_json(dir / "report.json", to_json(report));
}

Json data_parameters(const DataOptions& d) {
  return {{"input", d.input.string()}, {"col_x", d.col_x}, {"col_y", d.col_y}, {"negate_returns", d.negate_returns}};
}

struct LoadedPair {
  AlignedPanel panel;
  PseudoSample sample;
};

LoadedPair load_pair(const DataOptions& d) {
  if (d.col_x == d.col_y) throw DataError("--col-x and --col-y name the same column '" + d.col_x + "'");
  const auto series = load_csv(d.input, {d.col_x, d.col_y});
  auto panel = align_and_log_diff(series);
  if (d.negate_returns) {
    for (auto& col : panel.columns) {
      for (auto& r : col) r = -r;
    }
  }
  auto sample = pseudo_observations(panel.columns[0], panel.columns[1], d.col_x + "," + d.col_y);
  return {std::move(panel), std::move(sample)};
}

RectangleSelection nonempty_rectangle(const PseudoSample& sample, double q) {
  auto sel = mtd_maximizer(sample, q);
  if (sel.m_q() == 0) {
    throw EstimationError("q=" + format_double(q) + " selects no pairs in the MTD rectangle (m_q=0 of n=" +
                          std::to_string(sample.size()) + "); increase q");
  }
  return sel;
}

std::string pair_row(std::size_t index, const std::string& date, std::initializer_list<double> values) {
  std::string row = std::to_string(index) + "," + date;
  for (double v : values) row += "," + format_double(v);
  return row + "\r\n";
}

}  // namespace

RunReport cmd_simulate(const SimulateOptions& options) {
  const auto start = Clock::now();
  const SimConfig& c = options.config;
  c.validate();
  prepare_dir(options.out);
  StudyRow row;
  try {
    row = simulation_study(c);
  } catch (const std::runtime_error& e) {
    throw EstimationError(e.what());
  }

  RunReport report;
  report.command = "simulate";
  report.seed = c.seed;
  report.parameters = {{"gamma0", c.gamma0}, {"gamma1", c.gamma1}, {"phi", c.phi},   {"n", c.n},
                       {"reps", c.replications}, {"q", c.q}, {"m", c.m}, {"theta", c.theta},
                       {"seed", c.seed}, {"svg", options.svg}};

  Json study;
  study["gamma0"] = row.gamma0;
  study["gamma1"] = row.gamma1;
  study["q"] = c.q;
  study["m"] = c.m;
  study["theta"] = c.theta;
  study["n"] = c.n;
  study["replications"] = c.replications;
  study["kappa_star_true"] = row.kappa_star_true;
  study["mean"] = row.mean;
  if (row.stdev) study["sd"] = *row.stdev;
  const auto mq = summarize(std::vector<double>(row.replication_m_q.begin(), row.replication_m_q.end()));
  study["mean_m_q"] = mq.mean;
  study["seed"] = c.seed;
  emit_json(report, options.out, "study", "study.json", study);

  std::string reps = "index,estimate,m_q\r\n";
  for (std::size_t i = 0; i < row.replication_estimates.size(); ++i) {
    reps += std::to_string(i) + "," + format_double(row.replication_estimates[i]) + "," +
            std::to_string(row.replication_m_q[i]) + "\r\n";
  }
  emit(report, options.out, "replications", "replications.csv", reps);

  const auto hist = make_histogram(row.replication_estimates);
  const std::size_t total = row.replication_estimates.size();
  emit(report, options.out, "histogram", "histogram.csv", histogram_csv(hist, total));
  if (options.svg) {
    std::ostringstream title;
    title << "TOMD estimates, gamma0=" << format_double(c.gamma0) << ", gamma1=" << format_double(c.gamma1)
          << ", q=" << format_double(c.q);
    emit(report, options.out, "histogram_svg", "histogram.svg",
         histogram_svg(hist, total, row.mean, row.stdev.value_or(std::nan("")), title.str()));
  }
  finish(report, options.out, start);
  return report;
}

RunReport cmd_estimate(const EstimateOptions& options) {
  const auto start = Clock::now();
  prepare_dir(options.out);
  const auto [panel, sample] = load_pair(options.data);
  const auto rect = mtd_maximizer(sample, options.q);
  const auto diag = diagonal_selection(sample, options.q);
  if (rect.m_q() == 0 || diag.n_q() < 3) {
    throw EstimationError("q=" + format_double(options.q) + " leaves too few extreme pairs: m_q=" +
                          std::to_string(rect.m_q()) + " (need >= 1), n_q=" + std::to_string(diag.n_q()) +
                          " (need >= 3) of n=" + std::to_string(sample.size()));
  }
  const auto tomd = tomd_estimate(rect, options.m, options.theta, options.seed);
  const auto todd = todd_estimate(diag);

  RunReport report;
  report.command = "estimate";
  report.seed = options.seed;
  report.parameters = data_parameters(options.data);
  report.parameters["q"] = options.q;
  report.parameters["m"] = options.m;
  report.parameters["theta"] = options.theta;
  report.parameters["seed"] = options.seed;
  report.parameters["m_sweep"] = options.m_sweep;

  Json result;
  result["q"] = options.q;
  result["n"] = sample.size();
  result["m"] = options.m;
  result["theta"] = options.theta;
  result["m_q"] = rect.m_q();
  result["n_q"] = diag.n_q();
  result["phi_star_n"] = rect.phi_star_n;
  result["pi_star_n"] = rect.pi_star_n();
  result["tomd"] = tomd.value;
  result["todd"] = todd.value;
  result["rd_percent"] = relative_difference(tomd.value, todd.value);
  result["seed"] = options.seed;
  Json sweep = Json::array();
  for (std::size_t m : options.m_sweep) {
    sweep.push_back({{"m", m}, {"tomd", tomd_estimate(rect, m, options.theta, options.seed).value}});
  }
  result["m_sweep"] = sweep;
  emit_json(report, options.out, "estimate", "estimate.json", result);

  std::string rect_csv = "index,date,u,v,u_scaled,v_scaled\r\n";
  for (std::size_t k = 0; k < rect.m_q(); ++k) {
    const std::size_t i = rect.member_indices[k];
    const auto& p = sample.pairs()[i];
    rect_csv += pair_row(i, format_date(panel.dates[i]), {p.u, p.v, rect.scaled_pairs[k].u, rect.scaled_pairs[k].v});
  }
  emit(report, options.out, "rectangle_pairs", "rectangle_pairs.csv", rect_csv);

  std::string diag_csv = "index,date,u,v\r\n";
  for (std::size_t i : diag.member_indices) {
    const auto& p = sample.pairs()[i];
    diag_csv += pair_row(i, format_date(panel.dates[i]), {p.u, p.v});
  }
  emit(report, options.out, "diagonal_pairs", "diagonal_pairs.csv", diag_csv);
  finish(report, options.out, start);
  return report;
}

RunReport cmd_gof(const GofCommandOptions& options) {
  const auto start = Clock::now();
  prepare_dir(options.out);
  const auto [panel, sample] = load_pair(options.data);
  const auto rect = nonempty_rectangle(sample, options.q);
  GofOptions go;
  go.ks = options.ks;
  go.null = options.null;
  go.threads = resolve_threads(options.threads);
  const auto rows = gof_table(rect, options.directions, options.resamples, options.level, options.seed, go);

  RunReport report;
  report.command = "gof";
  report.seed = options.seed;
  report.parameters = data_parameters(options.data);
  report.parameters["q"] = options.q;
  Json dirs = Json::array();
  for (Direction d : options.directions) dirs.push_back(to_string(d));
  report.parameters["directions"] = dirs;
  report.parameters["resamples"] = options.resamples;
  report.parameters["level"] = options.level;
  report.parameters["seed"] = options.seed;
  report.parameters["ks_eval"] = to_string(options.ks);
  report.parameters["null"] = to_string(options.null);

  Json table;
  table["q"] = options.q;
  table["m_q"] = rect.m_q();
  table["phi_star_n"] = rect.phi_star_n;
  table["level"] = options.level;
  table["resamples"] = options.resamples;
  table["seed"] = options.seed;
  table["ks_eval"] = to_string(options.ks);
  table["null"] = to_string(options.null);
  Json json_rows = Json::array();
  std::string csv = "test,direction,Stat,Crit,Deci\r\n";
  for (const auto& r : rows) {
    json_rows.push_back({{"test", to_string(r.statistic_kind)},
                         {"direction", to_string(r.direction)},
                         {"Stat", r.statistic},
                         {"Crit", r.critical_value},
                         {"Deci", to_string(r.decision)}});
    csv += to_string(r.statistic_kind) + "," + to_string(r.direction) + "," + format_double(r.statistic) + "," +
           format_double(r.critical_value) + "," + to_string(r.decision) + "\r\n";
  }
  table["rows"] = json_rows;
  emit_json(report, options.out, "gof", "gof.json", table);
  emit(report, options.out, "gof_csv", "gof.csv", csv);
  finish(report, options.out, start);
  return report;
}

RunReport cmd_whitenoise(const WhitenoiseOptions& options) {
  const auto start = Clock::now();
  prepare_dir(options.out);
  const auto [panel, sample] = load_pair(options.data);
  const auto rect = mtd_maximizer(sample, options.q);
  const std::size_t needed = 5 * options.max_lag;
  if (rect.m_q() < needed) {
    throw EstimationError("extreme-pair subseries at q=" + format_double(options.q) + " has m_q=" +
                          std::to_string(rect.m_q()) + " pairs; max_lag=" + std::to_string(options.max_lag) +
                          " needs at least " + std::to_string(needed));
  }
  std::vector<double> u, v;
  for (std::size_t i : rect.member_indices) {
    u.push_back(sample.pairs()[i].u);
    v.push_back(sample.pairs()[i].v);
  }
  const auto suite = portmanteau_suite(u, v, options.max_lag);

  RunReport report;
  report.command = "whitenoise";
  report.parameters = data_parameters(options.data);
  report.parameters["q"] = options.q;
  report.parameters["max_lag"] = options.max_lag;

  Json doc;
  doc["q"] = options.q;
  doc["m_q"] = rect.m_q();
  doc["max_lag"] = options.max_lag;
  doc["alpha"] = suite.alpha;
  doc["retained_percent_pooled"] = suite.retained_percent_pooled;
  Json by_test = Json::object();
  for (std::size_t k = 0; k < kAllPortmanteauKinds.size(); ++k) {
    by_test[to_string(kAllPortmanteauKinds[k])] = suite.retained_percent_by_test[k];
  }
  doc["retained_percent_by_test"] = by_test;
  Json results = Json::array();
  std::string csv = "test,lag,statistic,df,p_value\r\n";
  for (const auto& r : suite.results) {
    results.push_back({{"test", to_string(r.test_kind)},
                       {"lag", r.lag},
                       {"statistic", r.statistic},
                       {"df", r.df},
                       {"p_value", r.p_value}});
    csv += to_string(r.test_kind) + "," + std::to_string(r.lag) + "," + format_double(r.statistic) + "," +
           format_double(r.df) + "," + format_double(r.p_value) + "\r\n";
  }
  doc["results"] = results;
  emit_json(report, options.out, "whitenoise", "whitenoise.json", doc);
  emit(report, options.out, "pvalues", "pvalues.csv", csv);
  finish(report, options.out, start);
  return report;
}

RunReport cmd_synth(const SynthOptions& options) {
  const auto start = Clock::now();
  if (options.rows < 3) throw std::invalid_argument("synth needs at least 3 rows");
  if (options.missing > options.rows / 10) throw std::invalid_argument("too many missing cells requested");
  SimConfig config;
  config.gamma0 = options.gamma0;
  config.gamma1 = options.gamma1;
  config.phi = options.phi;
  config.n = options.rows - 1;
  config.seed = derive_seed(options.seed, 0);
  const auto pairs = gc_pair_series(config);

  // Heavy-tailed margins: Student t with 4 degrees of freedom, 1% scale.
  const boost::math::students_t t4(4.0);
  auto to_return = [&](double u) { return 0.01 * boost::math::quantile(t4, std::clamp(u, 1e-300, 1.0 - 1e-16)); };
  Rng rng(derive_seed(options.seed, 1));
  std::vector<double> a(options.rows, 100.0), b(options.rows, 50.0), c(options.rows, 20.0);
  for (std::size_t i = 1; i < options.rows; ++i) {
    a[i] = a[i - 1] * std::exp(to_return(pairs[i - 1].u));
    b[i] = b[i - 1] * std::exp(to_return(pairs[i - 1].v));
    c[i] = c[i - 1] * std::exp(to_return(rng.uniform_open()));
  }
  std::set<std::pair<std::size_t, std::size_t>> holes;  // (row, column)
  while (holes.size() < options.missing) holes.insert({1 + rng.below(options.rows - 1), rng.below(3)});

  std::string csv = "date,A,B,C\r\n";
  Day day = Day{std::chrono::year{2000} / 1 / 3};
  for (std::size_t i = 0; i < options.rows; ++i) {
    while (std::chrono::weekday{day}.iso_encoding() > 5) day += std::chrono::days{1};
    csv += format_date(day);
    const double values[3] = {a[i], b[i], c[i]};
    for (std::size_t k = 0; k < 3; ++k) {
      csv += ",";
      if (!holes.contains({i, k})) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", values[k]);
        csv += buf;
      }
    }
    csv += "\r\n";
    day += std::chrono::days{1};
  }
  write_text(options.out, csv);

  RunReport report;
  report.command = "synth";
  report.seed = options.seed;
  report.parameters = {{"rows", options.rows}, {"gamma0", options.gamma0}, {"gamma1", options.gamma1},
                       {"phi", options.phi},   {"missing", options.missing}, {"seed", options.seed}};
  report.outputs["csv"] = options.out.filename().string();
  report.timing_seconds = seconds_since(start);
  return report;
}

namespace {

// Flags shared by the data-driven subcommands.
void add_data_flags(CLI::App* app, DataOptions& d, double& q) {
  app->add_option("--input", d.input, "CSV with a 'date' column and price columns")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--col-x", d.col_x, "first price column")->required();
  app->add_option("--col-y", d.col_y, "second price column")->required();
  app->add_option("--q", q, "rectangle area parameter, 0 < q <= 1")
      ->required()
      ->check(CLI::Validator(
          [](const std::string& s) -> std::string {
            double x = 0.0;
            try {
              x = std::stod(s);
            } catch (...) {
              return "q must be a number";
            }
            return (x > 0.0 && x <= 1.0) ? "" : "q must lie in (0, 1], got " + s;
          },
          "(0,1]"));
  app->add_flag("--negate-returns", d.negate_returns, "negate returns to study joint gains");
}

CLI::Validator positive_real() {
  return CLI::Validator(
      [](const std::string& s) -> std::string {
        try {
          return std::stod(s) > 0.0 ? "" : "must be positive";
        } catch (...) {
          return "must be a number";
        }
      },
      "POSITIVE");
}

void print_report(const RunReport& report) {
  std::cout << report.command << ": wrote";
  for (const auto& [key, path] : report.outputs) std::cout << ' ' << path;
  std::cout << " (" << std::fixed << std::setprecision(2) << report.timing_seconds << " s)\n";
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"tailmax: tail orders of maximal and diagonal dependence"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker cap (default: TAILMAX_THREADS, then hardware)");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "simulation study with the AR(1)-driven generalized Clayton sampler");
  simulate->add_option("--gamma0", sim.config.gamma0, "gamma0 > 0")->required();
  simulate->add_option("--gamma1", sim.config.gamma1, "gamma1 >= 0")->required();
  simulate->add_option("--phi", sim.config.phi, "AR(1) coefficient")->capture_default_str();
  simulate->add_option("--n", sim.config.n, "pairs per replication")->capture_default_str()->check(CLI::Range(2, 1 << 30));
  simulate->add_option("--reps", sim.config.replications, "replications")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--q", sim.config.q, "rectangle area parameter")->required()->check(CLI::Range(0.0, 1.0))->check(positive_real());
  simulate->add_option("--m", sim.config.m, "block size")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--theta", sim.config.theta, "Box-Cox parameter")->capture_default_str()->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", sim.config.seed, "64-bit seed")->capture_default_str();
  simulate->add_option("--out", sim.out, "output directory")->capture_default_str();
  bool no_svg = false;
  simulate->add_flag("--no-svg", no_svg, "skip the SVG histogram");

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "TOMD, TODD and their relative difference on CSV data");
  add_data_flags(estimate, est.data, est.q);
  estimate->add_option("--m", est.m, "block size")->capture_default_str()->check(CLI::PositiveNumber);
  estimate->add_option("--theta", est.theta, "Box-Cox parameter")->capture_default_str()->check(CLI::NonNegativeNumber);
  estimate->add_option("--seed", est.seed, "64-bit seed for block grouping")->capture_default_str();
  estimate->add_option("--m-sweep", est.m_sweep, "block sizes for a sensitivity sweep")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  estimate->add_option("--out", est.out, "output directory")->capture_default_str();

  GofCommandOptions gofo;
  std::string direction = "below", ks_eval = "member-points", null = "iid-uniform";
  auto* gof = app.add_subcommand("gof", "one-sided tests of the bound F* >= uv");
  add_data_flags(gof, gofo.data, gofo.q);
  gof->add_option("--direction", direction, "below, above or both")
      ->capture_default_str()
      ->check(CLI::IsMember({"below", "above", "both"}));
  gof->add_option("--resamples", gofo.resamples, "null resamples")->capture_default_str()->check(CLI::Range(100, 100000000));
  gof->add_option("--level", gofo.level, "test level")->capture_default_str()->check(CLI::Range(0.5, 0.9999));
  gof->add_option("--seed", gofo.seed, "64-bit seed")->capture_default_str();
  gof->add_option("--ks-eval", ks_eval, "member-points or exact")
      ->capture_default_str()
      ->check(CLI::IsMember({"member-points", "exact"}));
  gof->add_option("--null", null, "iid-uniform, rank-grid or pair-bootstrap")
      ->capture_default_str()
      ->check(CLI::IsMember({"iid-uniform", "rank-grid", "pair-bootstrap"}));
  gof->add_option("--out", gofo.out, "output directory")->capture_default_str();

  WhitenoiseOptions wn;
  auto* whitenoise = app.add_subcommand("whitenoise", "portmanteau white-noise tests on the extreme-pair subseries");
  add_data_flags(whitenoise, wn.data, wn.q);
  whitenoise->add_option("--max-lag", wn.max_lag, "largest lag")->capture_default_str()->check(CLI::Range(1, 10000));
  whitenoise->add_option("--out", wn.out, "output directory")->capture_default_str();

  SynthOptions syn;
  auto* synth = app.add_subcommand("synth", "write a synthetic price CSV");
  synth->add_option("--rows", syn.rows, "rows")->capture_default_str()->check(CLI::Range(30, 10000000));
  synth->add_option("--gamma0", syn.gamma0, "gamma0 > 0")->capture_default_str()->check(positive_real());
  synth->add_option("--gamma1", syn.gamma1, "gamma1 >= 0")->capture_default_str()->check(CLI::NonNegativeNumber);
  synth->add_option("--phi", syn.phi, "AR(1) coefficient")->capture_default_str()->check(CLI::Range(-0.999, 0.999));
  synth->add_option("--missing", syn.missing, "empty cells")->capture_default_str();
  synth->add_option("--seed", syn.seed, "64-bit seed")->capture_default_str();
  synth->add_option("--out", syn.out, "output CSV path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunReport report;
    if (*simulate) {
      sim.svg = !no_svg;
      sim.config.threads = threads;
      report = cmd_simulate(sim);
    } else if (*estimate) {
      report = cmd_estimate(est);
    } else if (*gof) {
      if (direction == "below") gofo.directions = {Direction::BelowIndependence};
      if (direction == "above") gofo.directions = {Direction::AboveIndependence};
      if (direction == "both") gofo.directions = {kAllDirections.begin(), kAllDirections.end()};
      gofo.ks = ks_eval == "exact" ? KsEvaluation::Exact : KsEvaluation::MemberPoints;
      gofo.null = null == "rank-grid"        ? NullScheme::RankGrid
                  : null == "pair-bootstrap" ? NullScheme::PairBootstrap
                                             : NullScheme::IidUniform;
      gofo.threads = threads;
      report = cmd_gof(gofo);
    } else if (*whitenoise) {
      report = cmd_whitenoise(wn);
    } else if (*synth) {
      report = cmd_synth(syn);
    }
    print_report(report);
    return kExitOk;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const OutputError& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kExitOutput;
  } catch (const EstimationError& e) {
    std::cerr << "estimation error: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "estimation error: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const std::domain_error& e) {
    std::cerr << "estimation error: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
}

}  // namespace tailmax
