#include "tailmax/empirical_tail.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tailmax {

namespace {

void require_level(double q) {
  if (!(q > 0.0 && q <= 1.0)) {
    std::ostringstream msg;
    msg << "threshold q = " << q << " is outside (0,1]";
    throw std::domain_error(msg.str());
  }
}

std::vector<std::size_t> ranks_of(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<std::size_t> rank(values.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) rank[order[pos]] = pos + 1;
  return rank;
}

class Fenwick {
public:
  explicit Fenwick(std::size_t size) : tree_(size + 1, 0) {}
  void add(std::size_t index) {
    for (std::size_t i = index + 1; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }
  // Number of inserted indices <= index.
  std::size_t prefix(std::size_t index) const {
    std::size_t total = 0;
    for (std::size_t i = index + 1; i > 0; i -= i & (~i + 1)) total += tree_[i];
    return total;
  }

private:
  std::vector<std::size_t> tree_;
};

struct Interval {
  double start;
  double end;
};

// Closest-to-q ordering used for every tie-break on phi.
bool closer_to_level(double x, double y, double log_q) {
  const double dx = std::abs(std::log(x) - log_q);
  const double dy = std::abs(std::log(y) - log_q);
  if (dx != dy) return dx < dy;
  return x < y;
}

}  // namespace

PseudoSample::PseudoSample(std::vector<UnitPair> pairs, std::string source_label)
    : pairs_(std::move(pairs)), source_label_(std::move(source_label)) {
  for (const auto& p : pairs_) {
    if (!(p.u > 0.0 && p.u <= 1.0) || !(p.v > 0.0 && p.v <= 1.0)) {
      throw std::invalid_argument("pseudo-observations must lie in (0,1]");
    }
  }
}

PseudoSample pseudo_observations(std::span<const double> x, std::span<const double> y,
                                 std::string source_label) {
  if (x.size() != y.size()) {
    std::ostringstream msg;
    msg << "series lengths differ (" << x.size() << " vs " << y.size() << ")";
    throw std::invalid_argument(msg.str());
  }
  if (x.size() < 2) throw std::invalid_argument("need at least 2 paired observations");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i]) || std::isnan(y[i])) {
      throw std::invalid_argument("NaN in input series at index " + std::to_string(i));
    }
  }
  const auto rx = ranks_of(x);
  const auto ry = ranks_of(y);
  const double denom = static_cast<double>(x.size() + 1);
  std::vector<UnitPair> pairs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    pairs[i] = {static_cast<double>(rx[i]) / denom, static_cast<double>(ry[i]) / denom};
  }
  return PseudoSample(std::move(pairs), std::move(source_label));
}

double empirical_copula(const PseudoSample& sample, double u, double v) {
  if (!(u >= 0.0 && u <= 1.0) || !(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error("empirical_copula arguments must lie in [0,1]");
  }
  if (sample.size() == 0) throw std::invalid_argument("empty sample");
  std::size_t count = 0;
  for (const auto& p : sample.pairs()) count += (p.u <= u && p.v <= v) ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(sample.size());
}

RectangleSelection mtd_maximizer(const PseudoSample& sample, double q) {
  require_level(q);
  const double q2 = q * q;
  const double log_q = std::log(q);
  const auto pairs = sample.pairs();

  RectangleSelection out;
  out.q = q;
  out.n = pairs.size();
  out.phi_star_n = q;

  std::vector<std::size_t> active;
  std::vector<Interval> intervals(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    intervals[i] = {std::max(pairs[i].u, q2), std::min(q2 / pairs[i].v, 1.0)};
    if (intervals[i].start <= intervals[i].end) active.push_back(i);
  }
  if (active.empty()) return out;

  std::vector<double> starts;
  std::vector<double> ends;
  starts.reserve(active.size());
  ends.reserve(active.size());
  for (std::size_t i : active) {
    starts.push_back(intervals[i].start);
    ends.push_back(intervals[i].end);
  }
  std::sort(starts.begin(), starts.end());
  std::sort(ends.begin(), ends.end());

  // Sweep: at each distinct endpoint x the count is #{start <= x} - #{end < x}.
  // The count only rises at starts, so the maximal segments are [s, e] where s
  // is a start position and e the next end position.
  struct Segment {
    double lo;
    double hi;
  };
  std::vector<Segment> best_segments;
  std::size_t best = 0;
  std::size_t count = 0;
  std::size_t si = 0;
  std::size_t ei = 0;
  bool open = false;
  while (si < starts.size() || ei < ends.size()) {
    const double x = (si < starts.size() && starts[si] <= ends[ei]) ? starts[si] : ends[ei];
    while (si < starts.size() && starts[si] == x) {
      ++count;
      ++si;
    }
    if (count > best) {
      best = count;
      best_segments.clear();
      best_segments.push_back({x, x});
      open = true;
    } else if (count == best && !open) {
      best_segments.push_back({x, x});
      open = true;
    }
    bool closed_here = false;
    while (ei < ends.size() && ends[ei] == x) {
      --count;
      ++ei;
      closed_here = true;
    }
    if (open && closed_here) {
      best_segments.back().hi = x;
      open = false;
    }
  }

  // Best candidate inside a maximal segment; segments are disjoint and sorted.
  auto in_best_segment = [&](double x) {
    auto it = std::upper_bound(best_segments.begin(), best_segments.end(), x,
                               [](double value, const Segment& s) { return value < s.lo; });
    if (it == best_segments.begin()) return false;
    --it;
    return x <= it->hi;
  };
  bool found = false;
  double phi = q;
  auto consider = [&](double x) {
    if (!in_best_segment(x)) return;
    if (!found || closer_to_level(x, phi, log_q)) {
      phi = x;
      found = true;
    }
  };
  consider(q2);
  consider(1.0);
  for (const auto& p : pairs) {
    consider(std::max(p.u, q2));
    consider(std::min(q2 / p.v, 1.0));
  }

  out.phi_star_n = phi;
  for (std::size_t i : active) {
    if (intervals[i].start <= phi && phi <= intervals[i].end) out.member_indices.push_back(i);
  }
  out.scaled_pairs.reserve(out.member_indices.size());
  for (std::size_t i : out.member_indices) {
    out.scaled_pairs.push_back({std::min(1.0, pairs[i].u / phi), std::min(1.0, pairs[i].v * phi / q2)});
  }
  return out;
}

DiagonalSelection diagonal_selection(const PseudoSample& sample, double q) {
  require_level(q);
  DiagonalSelection out;
  out.q = q;
  const auto pairs = sample.pairs();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].u <= q && pairs[i].v <= q) {
      out.member_indices.push_back(i);
      out.w_values.push_back(q / std::max(pairs[i].u, pairs[i].v));
    }
  }
  std::sort(out.w_values.begin(), out.w_values.end(), std::greater<>());
  return out;
}

double empirical_fstar(const RectangleSelection& selection, double u, double v) {
  if (selection.m_q() == 0) throw std::invalid_argument("empirical_fstar: empty rectangle selection");
  std::size_t count = 0;
  for (const auto& p : selection.scaled_pairs) count += (p.u <= u && p.v <= v) ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(selection.m_q());
}

std::vector<std::size_t> dominance_counts(std::span<const UnitPair> points) {
  const std::size_t m = points.size();
  std::vector<double> vs(m);
  for (std::size_t i = 0; i < m; ++i) vs[i] = points[i].v;
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  auto v_rank = [&](double v) {
    return static_cast<std::size_t>(std::lower_bound(vs.begin(), vs.end(), v) - vs.begin());
  };

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a].u < points[b].u || (points[a].u == points[b].u && a < b);
  });

  Fenwick tree(vs.size());
  std::vector<std::size_t> counts(m, 0);
  std::size_t g = 0;
  while (g < m) {
    std::size_t h = g;
    while (h < m && points[order[h]].u == points[order[g]].u) {
      tree.add(v_rank(points[order[h]].v));
      ++h;
    }
    for (std::size_t k = g; k < h; ++k) counts[order[k]] = tree.prefix(v_rank(points[order[k]].v));
    g = h;
  }
  return counts;
}

}  // namespace tailmax
