#pragma once

// One-sided tests of the rectangle-law bound F_q*(u,v) >= uv.
//
//   BelowIndependence: H0  F* >= uv   vs  H1  F* < uv somewhere
//                      statistics built from {uv - F*}_+
//   AboveIndependence: H0* F* == uv  vs  H1* F* > uv somewhere
//                      statistics built from {F* - uv}_+
//
// KS = sqrt(m) sup {.}_+, CvM = sum over members of {.}_+^2, and
// AD = sum over members of {.}_+^2 / (u(1-u)v(1-v)).  Critical values come
// from resampling member sets of the same size under an independence null.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tailmax/empirical_tail.hpp"

namespace tailmax {

enum class StatisticKind { KS, CvM, AD };
enum class Direction { BelowIndependence, AboveIndependence };
enum class Decision { Retain, Reject };

/// Where the KS supremum is taken.  MemberPoints evaluates {.}_+ at the
/// member coordinates with inclusive counts; Exact takes the supremum over
/// the whole unit square using the cell structure of F*.
enum class KsEvaluation { MemberPoints, Exact };

/// Null member sets for critical values.  IidUniform draws m independent
/// uniform pairs; RankGrid pairs k/(m+1) with a random permutation of the
/// same grid; PairBootstrap resamples each coordinate independently, with
/// replacement, from the observed scaled members.
enum class NullScheme { IidUniform, RankGrid, PairBootstrap };

struct GofOptions {
  KsEvaluation ks = KsEvaluation::MemberPoints;
  NullScheme null = NullScheme::IidUniform;
  unsigned threads = 1;
};

inline constexpr std::array<StatisticKind, 3> kAllKinds{StatisticKind::KS, StatisticKind::CvM, StatisticKind::AD};
inline constexpr std::array<Direction, 2> kAllDirections{Direction::BelowIndependence,
                                                         Direction::AboveIndependence};

std::string to_string(StatisticKind kind);
std::string to_string(Direction direction);
std::string to_string(Decision decision);
std::string to_string(KsEvaluation mode);
std::string to_string(NullScheme scheme);

/// All six statistics of one member set, indexed [direction][kind].
using StatisticTable = std::array<std::array<double, 3>, 2>;

StatisticTable gof_statistics(std::span<const UnitPair> scaled, KsEvaluation ks = KsEvaluation::MemberPoints);

double gof_statistic(std::span<const UnitPair> scaled, StatisticKind kind, Direction direction,
                     KsEvaluation ks = KsEvaluation::MemberPoints);
double gof_statistic(const RectangleSelection& selection, StatisticKind kind, Direction direction,
                     KsEvaluation ks = KsEvaluation::MemberPoints);

/// Level-quantiles (order statistic ceil(level * N)) of all six statistics
/// over `n_resamples` null member sets of size m_q.  `observed` feeds the
/// PairBootstrap scheme and is ignored otherwise.
StatisticTable resampled_critical_values(std::size_t m_q, std::size_t n_resamples, double level,
                                         std::uint64_t seed, const GofOptions& options = {},
                                         std::span<const UnitPair> observed = {});

double resampled_critical_value(std::size_t m_q, StatisticKind kind, Direction direction,
                                std::size_t n_resamples, double level, std::uint64_t seed,
                                const GofOptions& options = {}, std::span<const UnitPair> observed = {});

struct GofResult {
  StatisticKind statistic_kind = StatisticKind::KS;
  Direction direction = Direction::BelowIndependence;
  double statistic = 0.0;
  double critical_value = 0.0;
  double level = 0.95;
  std::size_t n_resamples = 0;
  Decision decision = Decision::Retain;  // Retain iff statistic < critical_value
  std::uint64_t seed = 0;
};

GofResult gof_test(const RectangleSelection& selection, StatisticKind kind, Direction direction,
                   std::size_t n_resamples, double level, std::uint64_t seed, const GofOptions& options = {});

/// Every (kind, direction) in `directions`, sharing one set of resamples.
std::vector<GofResult> gof_table(const RectangleSelection& selection, std::span<const Direction> directions,
                                 std::size_t n_resamples, double level, std::uint64_t seed,
                                 const GofOptions& options = {});

}  // namespace tailmax
