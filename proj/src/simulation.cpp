#include "tailmax/simulation.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include "tailmax/numeric.hpp"
#include "tailmax/rng.hpp"

namespace tailmax {

void SimConfig::validate() const {
  if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) throw std::invalid_argument("gamma0 must be > 0");
  if (!(gamma1 >= 0.0) || !std::isfinite(gamma1)) throw std::invalid_argument("gamma1 must be >= 0");
  if (!(phi > -1.0 && phi < 1.0)) throw std::invalid_argument("phi must lie in (-1,1)");
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (replications < 1) throw std::invalid_argument("replications must be positive");
  if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("q must lie in (0,1]");
  if (m < 1) throw std::invalid_argument("m must be positive");
  if (!(theta >= 0.0)) throw std::invalid_argument("theta must be >= 0");
}

double SimConfig::sigma() const { return 1.0 / std::sqrt(1.0 - phi * phi); }

std::vector<double> ar1_series(double phi, std::size_t n, std::uint64_t seed) {
  if (!(phi > -1.0 && phi < 1.0)) throw std::invalid_argument("AR(1) coefficient must satisfy |phi| < 1");
  std::vector<double> z(n);
  if (n == 0) return z;
  Rng rng(seed);
  z[0] = rng.normal() / std::sqrt(1.0 - phi * phi);
  for (std::size_t i = 1; i < n; ++i) z[i] = phi * z[i - 1] + rng.normal();
  return z;
}

double lomax_sample(double alpha, double lam, double uniform) {
  if (!(alpha > 0.0)) throw std::invalid_argument("Lomax shape must be positive");
  if (!(lam > 0.0)) throw std::invalid_argument("Lomax scale must be positive");
  if (!(uniform >= 0.0 && uniform < 1.0)) throw std::domain_error("Lomax uniform must lie in [0,1)");
  return lam * std::expm1(-std::log1p(-uniform) / alpha);
}

namespace {

// One generalized-Clayton pair given V; `rng` supplies the Lomax uniforms.
UnitPair gc_pair_given_v(double gamma0, double gamma1, double v, Rng& rng) {
  const double lam_x = std::exp(-std::log(v) / gamma0);
  const double x = lomax_sample(gamma0 + 1.0, lam_x, rng.uniform());
  double lower = x;
  if (gamma1 > 0.0) lower = std::min(x, lomax_sample(gamma1, 1.0, rng.uniform()));
  const double u = std::exp(-(gamma0 + gamma1) * std::log1p(lower));
  return {u, v};
}

}  // namespace

std::vector<UnitPair> gc_pair_series(const SimConfig& config) {
  config.validate();
  const auto z = ar1_series(config.phi, config.n, derive_seed(config.seed, 0));
  Rng rng(derive_seed(config.seed, 1));
  const double sigma = config.sigma();
  std::vector<UnitPair> pairs(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    const double v = normal_cdf(z[i] / sigma);
    pairs[i] = gc_pair_given_v(config.gamma0, config.gamma1, v, rng);
  }
  return pairs;
}

std::vector<UnitPair> sample_copula(const CopulaModel& model, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<UnitPair> pairs(n);
  if (const auto* mo = std::get_if<MarshallOlkin>(&model.family())) {
    if (mo->a == 0.0 || mo->b == 0.0) {
      for (auto& p : pairs) p = {rng.uniform_open(), rng.uniform_open()};
      return pairs;
    }
    // Shocks with rates l1 = (1-a)/a, l2 = (1-b)/b, l12 = 1:
    // X = min(E1, E12), Y = min(E2, E12), U = exp(-X/a), V = exp(-Y/b).
    const double l1 = (1.0 - mo->a) / mo->a;
    const double l2 = (1.0 - mo->b) / mo->b;
    const double inf = std::numeric_limits<double>::infinity();
    for (auto& p : pairs) {
      const double e1 = l1 > 0.0 ? rng.exponential() / l1 : inf;
      const double e2 = l2 > 0.0 ? rng.exponential() / l2 : inf;
      const double e12 = rng.exponential();
      p = {std::exp(-std::min(e1, e12) / mo->a), std::exp(-std::min(e2, e12) / mo->b)};
    }
    return pairs;
  }
  if (const auto* gc = std::get_if<GeneralizedClayton>(&model.family())) {
    for (auto& p : pairs) p = gc_pair_given_v(gc->gamma0, gc->gamma1, rng.uniform_open(), rng);
    return pairs;
  }
  for (auto& p : pairs) p = {rng.uniform_open(), rng.uniform_open()};
  return pairs;
}

PseudoSample pseudo_observations(std::span<const UnitPair> raw, std::string source_label) {
  std::vector<double> x(raw.size());
  std::vector<double> y(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    x[i] = raw[i].u;
    y[i] = raw[i].v;
  }
  return pseudo_observations(x, y, std::move(source_label));
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t index) noexcept {
  return derive_seed(seed, static_cast<std::uint64_t>(index));
}

ReplicationResult run_replication(const SimConfig& config, std::size_t index) {
  const std::uint64_t rep = replication_seed(config.seed, index);
  SimConfig local = config;
  local.seed = derive_seed(rep, 0);
  const auto raw = gc_pair_series(local);
  const auto sample = pseudo_observations(raw);
  const auto selection = mtd_maximizer(sample, config.q);
  const auto estimate = tomd_estimate(selection, config.m, config.theta, derive_seed(rep, 1));
  return {estimate.value, selection.m_q()};
}

StudyRow simulation_study(const SimConfig& config) {
  config.validate();
  std::vector<ReplicationResult> results(config.replications);
  std::vector<std::string> errors(config.replications);
  parallel_for(config.replications, resolve_threads(config.threads), [&](std::size_t r) {
    try {
      results[r] = run_replication(config, r);
    } catch (const std::exception& e) {
      errors[r] = e.what();
    }
  });
  for (std::size_t r = 0; r < errors.size(); ++r) {
    if (!errors[r].empty()) {
      throw std::runtime_error("replication " + std::to_string(r) + " failed: " + errors[r]);
    }
  }

  StudyRow row;
  row.gamma0 = config.gamma0;
  row.gamma1 = config.gamma1;
  row.kappa_star_true = MtdOracle(CopulaModel::generalized_clayton(config.gamma0, config.gamma1)).tomd();
  row.replication_estimates.reserve(results.size());
  for (const auto& r : results) {
    row.replication_estimates.push_back(r.estimate);
    row.replication_m_q.push_back(r.m_q);
  }
  const auto summary = summarize(row.replication_estimates);
  row.mean = summary.mean;
  row.stdev = summary.stdev;
  return row;
}

}  // namespace tailmax
