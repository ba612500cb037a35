#include "tailmax/gof.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tailmax/numeric.hpp"
#include "tailmax/rng.hpp"

namespace tailmax {

namespace {

constexpr std::size_t index_of(Direction d) { return d == Direction::BelowIndependence ? 0 : 1; }
constexpr std::size_t index_of(StatisticKind k) {
  return k == StatisticKind::KS ? 0 : (k == StatisticKind::CvM ? 1 : 2);
}

std::vector<double> distinct_sorted(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

// sup over the unit square of uv - F*(u,v).  Within a cell F* is constant
// at its lower-left value, so the supremum is the upper-right corner product
// minus the strict count #{u_k < u, v_k < v}.
double exact_sup_below(std::span<const UnitPair> pts) {
  const std::size_t m = pts.size();
  std::vector<double> us(m), vs(m);
  for (std::size_t k = 0; k < m; ++k) {
    us[k] = pts[k].u;
    vs[k] = pts[k].v;
  }
  us.push_back(1.0);
  vs.push_back(1.0);
  const auto gu = distinct_sorted(us);
  const auto gv = distinct_sorted(vs);

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a].u < pts[b].u; });

  std::vector<std::size_t> below(gv.size(), 0);  // #{added k : v_k < gv[b]}
  std::size_t next = 0;
  double best = 0.0;
  for (double u : gu) {
    while (next < m && pts[order[next]].u < u) {
      const double v = pts[order[next]].v;
      const auto first = static_cast<std::size_t>(std::upper_bound(gv.begin(), gv.end(), v) - gv.begin());
      for (std::size_t b = first; b < gv.size(); ++b) ++below[b];
      ++next;
    }
    for (std::size_t b = 0; b < gv.size(); ++b) {
      best = std::max(best, u * gv[b] - static_cast<double>(below[b]) / static_cast<double>(m));
    }
  }
  return best;
}

// sup of F*(u,v) - uv.  F* is right-continuous, so the supremum sits at the
// lower-left corners of cells: the grid of member coordinates with
// inclusive counts.
double exact_sup_above(std::span<const UnitPair> pts) {
  const std::size_t m = pts.size();
  std::vector<double> us(m), vs(m);
  for (std::size_t k = 0; k < m; ++k) {
    us[k] = pts[k].u;
    vs[k] = pts[k].v;
  }
  const auto gu = distinct_sorted(us);
  const auto gv = distinct_sorted(vs);

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a].u < pts[b].u; });

  std::vector<std::size_t> within(gv.size(), 0);  // #{added k : v_k <= gv[b]}
  std::size_t next = 0;
  double best = 0.0;
  for (double u : gu) {
    while (next < m && pts[order[next]].u <= u) {
      const double v = pts[order[next]].v;
      const auto first = static_cast<std::size_t>(std::lower_bound(gv.begin(), gv.end(), v) - gv.begin());
      for (std::size_t b = first; b < gv.size(); ++b) ++within[b];
      ++next;
    }
    for (std::size_t b = 0; b < gv.size(); ++b) {
      best = std::max(best, static_cast<double>(within[b]) / static_cast<double>(m) - u * gv[b]);
    }
  }
  return best;
}

// Anderson-Darling weight coordinate; only coordinates on the boundary of
// [0,1] are moved, to 1/(2m) inside it.
double ad_coordinate(double x, std::size_t m) {
  const double edge = 0.5 / static_cast<double>(m);
  if (x <= 0.0) return edge;
  if (x >= 1.0) return 1.0 - edge;
  return x;
}

void require_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("test level must lie in (0,1)");
}

std::vector<UnitPair> draw_null(std::size_t m, NullScheme scheme, std::span<const UnitPair> observed, Rng& rng) {
  std::vector<UnitPair> pts(m);
  switch (scheme) {
    case NullScheme::IidUniform:
      for (auto& p : pts) p = {rng.uniform_open(), rng.uniform_open()};
      break;
    case NullScheme::RankGrid: {
      std::vector<std::size_t> perm(m);
      std::iota(perm.begin(), perm.end(), std::size_t{1});
      rng.shuffle(std::span<std::size_t>(perm));
      const double denom = static_cast<double>(m + 1);
      for (std::size_t k = 0; k < m; ++k) {
        pts[k] = {static_cast<double>(k + 1) / denom, static_cast<double>(perm[k]) / denom};
      }
      break;
    }
    case NullScheme::PairBootstrap:
      if (observed.empty()) throw std::invalid_argument("pair bootstrap needs the observed member pairs");
      for (auto& p : pts) {
        p = {observed[rng.below(observed.size())].u, observed[rng.below(observed.size())].v};
      }
      break;
  }
  return pts;
}

}  // namespace

std::string to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::KS: return "KS";
    case StatisticKind::CvM: return "CvM";
    case StatisticKind::AD: return "AD";
  }
  return "?";
}

std::string to_string(Direction direction) {
  return direction == Direction::BelowIndependence ? "below" : "above";
}

std::string to_string(Decision decision) { return decision == Decision::Retain ? "Retain" : "Reject"; }

std::string to_string(KsEvaluation mode) { return mode == KsEvaluation::Exact ? "exact" : "member-points"; }

std::string to_string(NullScheme scheme) {
  switch (scheme) {
    case NullScheme::IidUniform: return "iid-uniform";
    case NullScheme::RankGrid: return "rank-grid";
    case NullScheme::PairBootstrap: return "pair-bootstrap";
  }
  return "?";
}

StatisticTable gof_statistics(std::span<const UnitPair> scaled, KsEvaluation ks) {
  const std::size_t m = scaled.size();
  if (m == 0) throw std::invalid_argument("goodness-of-fit statistics need a nonempty member set");
  const auto counts = dominance_counts(scaled);
  const double md = static_cast<double>(m);

  double sup_below = 0.0, sup_above = 0.0;
  CompensatedSum cvm_below, cvm_above, ad_below, ad_above;
  for (std::size_t k = 0; k < m; ++k) {
    const double u = scaled[k].u;
    const double v = scaled[k].v;
    const double diff = u * v - static_cast<double>(counts[k]) / md;
    const double below = std::max(diff, 0.0);
    const double above = std::max(-diff, 0.0);
    sup_below = std::max(sup_below, below);
    sup_above = std::max(sup_above, above);
    const double wu = ad_coordinate(u, m);
    const double wv = ad_coordinate(v, m);
    const double weight = 1.0 / (wu * (1.0 - wu) * wv * (1.0 - wv));
    cvm_below.add(below * below);
    cvm_above.add(above * above);
    ad_below.add(below * below * weight);
    ad_above.add(above * above * weight);
  }
  if (ks == KsEvaluation::Exact) {
    sup_below = exact_sup_below(scaled);
    sup_above = exact_sup_above(scaled);
  }
  const double root_m = std::sqrt(md);
  StatisticTable table{};
  table[0] = {root_m * sup_below, cvm_below.value(), ad_below.value()};
  table[1] = {root_m * sup_above, cvm_above.value(), ad_above.value()};
  return table;
}

double gof_statistic(std::span<const UnitPair> scaled, StatisticKind kind, Direction direction, KsEvaluation ks) {
  return gof_statistics(scaled, ks)[index_of(direction)][index_of(kind)];
}

double gof_statistic(const RectangleSelection& selection, StatisticKind kind, Direction direction,
                     KsEvaluation ks) {
  return gof_statistic(selection.scaled_pairs, kind, direction, ks);
}

StatisticTable resampled_critical_values(std::size_t m_q, std::size_t n_resamples, double level,
                                         std::uint64_t seed, const GofOptions& options,
                                         std::span<const UnitPair> observed) {
  require_level(level);
  if (m_q == 0) throw std::invalid_argument("critical values need m_q >= 1");
  if (n_resamples < 100) throw std::invalid_argument("need at least 100 resamples");

  std::vector<StatisticTable> draws(n_resamples);
  parallel_for(n_resamples, options.threads, [&](std::size_t trial) {
    Rng rng(derive_seed(seed, trial));
    const auto pts = draw_null(m_q, options.null, observed, rng);
    draws[trial] = gof_statistics(pts, options.ks);
  });

  const auto rank = static_cast<std::size_t>(std::ceil(level * static_cast<double>(n_resamples)));
  const std::size_t pick = std::clamp<std::size_t>(rank, 1, n_resamples) - 1;
  StatisticTable crit{};
  std::vector<double> column(n_resamples);
  for (std::size_t d = 0; d < 2; ++d) {
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t t = 0; t < n_resamples; ++t) column[t] = draws[t][d][k];
      std::nth_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(pick), column.end());
      crit[d][k] = column[pick];
    }
  }
  return crit;
}

double resampled_critical_value(std::size_t m_q, StatisticKind kind, Direction direction, std::size_t n_resamples,
                                double level, std::uint64_t seed, const GofOptions& options,
                                std::span<const UnitPair> observed) {
  return resampled_critical_values(m_q, n_resamples, level, seed, options, observed)[index_of(direction)]
                                                                                      [index_of(kind)];
}

std::vector<GofResult> gof_table(const RectangleSelection& selection, std::span<const Direction> directions,
                                 std::size_t n_resamples, double level, std::uint64_t seed,
                                 const GofOptions& options) {
  if (selection.m_q() == 0) throw std::invalid_argument("goodness-of-fit test needs a nonempty rectangle");
  const auto stats = gof_statistics(selection.scaled_pairs, options.ks);
  const auto crit =
      resampled_critical_values(selection.m_q(), n_resamples, level, seed, options, selection.scaled_pairs);
  std::vector<GofResult> rows;
  for (Direction d : directions) {
    for (StatisticKind k : kAllKinds) {
      GofResult r;
      r.statistic_kind = k;
      r.direction = d;
      r.statistic = stats[index_of(d)][index_of(k)];
      r.critical_value = crit[index_of(d)][index_of(k)];
      r.level = level;
      r.n_resamples = n_resamples;
      r.decision = r.statistic < r.critical_value ? Decision::Retain : Decision::Reject;
      r.seed = seed;
      rows.push_back(r);
    }
  }
  return rows;
}

GofResult gof_test(const RectangleSelection& selection, StatisticKind kind, Direction direction,
                   std::size_t n_resamples, double level, std::uint64_t seed, const GofOptions& options) {
  const std::array<Direction, 1> one{direction};
  for (const auto& r : gof_table(selection, one, n_resamples, level, seed, options)) {
    if (r.statistic_kind == kind) return r;
  }
  throw std::logic_error("gof_test: statistic kind missing from table");
}

}  // namespace tailmax
