#pragma once

// Stationary generalized-Clayton pairs driven by a latent AR(1) series, iid
// samplers for the analytic copulas, and the replication study built on them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tailmax/copula_models.hpp"
#include "tailmax/empirical_tail.hpp"
#include "tailmax/estimators.hpp"

namespace tailmax {

struct SimConfig {
  double gamma0 = 0.1;
  double gamma1 = 0.8;
  double phi = 0.6;  // AR(1) coefficient of the latent series
  std::size_t n = 500'000;
  std::size_t replications = 1000;
  double q = 0.1;
  std::size_t m = 5;
  double theta = kDefaultTheta;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: resolve_threads()

  /// Throws std::invalid_argument on any out-of-range field.
  void validate() const;
  /// Stationary standard deviation 1 / sqrt(1 - phi^2).
  double sigma() const;
};

/// Z_i = phi Z_{i-1} + e_i with standard normal innovations; the first value
/// is drawn from the stationary law N(0, 1 / (1 - phi^2)).
std::vector<double> ar1_series(double phi, std::size_t n, std::uint64_t seed);

/// Inverse-cdf Lomax draw lam ((1 - uniform)^(-1/alpha) - 1); survival
/// (1 + z / lam)^(-alpha).
double lomax_sample(double alpha, double lam, double uniform);

/// (U_i, V_i) with V_i = Phi(Z_i / sigma) for the latent AR(1) series Z, and
/// U_i = (1 + min(X_i, Y_i))^(-g*), X_i | V_i ~ Lomax(g0 + 1, V_i^(-1/g0)),
/// Y_i ~ Lomax(g1, 1) (Y = +inf when g1 = 0).  Each pair follows the
/// generalized Clayton copula.  Uses config.seed.
std::vector<UnitPair> gc_pair_series(const SimConfig& config);

/// n iid pairs from an analytic copula.  Marshall-Olkin uses the
/// exponential-shock construction; generalized Clayton uses the conditional
/// Lomax construction with iid V.
std::vector<UnitPair> sample_copula(const CopulaModel& model, std::size_t n, std::uint64_t seed);

/// Rank transform of raw pairs (see pseudo_observations).
PseudoSample pseudo_observations(std::span<const UnitPair> raw, std::string source_label = {});

struct ReplicationResult {
  double estimate = 0.0;
  std::size_t m_q = 0;
};

struct StudyRow {
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double kappa_star_true = 0.0;
  double mean = 0.0;
  std::optional<double> stdev;  // absent with a single replication
  std::vector<double> replication_estimates;
  std::vector<std::size_t> replication_m_q;
};

/// Seed used by replication `index` of a study seeded with `seed`; the
/// series uses derive_seed(r, 0) and the block grouping derive_seed(r, 1).
std::uint64_t replication_seed(std::uint64_t seed, std::size_t index) noexcept;

ReplicationResult run_replication(const SimConfig& config, std::size_t index);

/// Runs every replication (in parallel on config.threads workers) and
/// aggregates.  A failing replication aborts the study with an error naming
/// its index.
StudyRow simulation_study(const SimConfig& config);

}  // namespace tailmax
