#pragma once

// Pseudo-observations, the empirical copula, and the two extreme-pair
// selections used downstream: the empirical MTD rectangle (TOMD) and the
// diagonal square (TODD).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tailmax {

struct UnitPair {
  double u = 0.0;
  double v = 0.0;
  friend bool operator==(const UnitPair&, const UnitPair&) = default;
};

/// Time-ordered pairs on the unit square.
class PseudoSample {
public:
  PseudoSample() = default;
  /// Throws std::invalid_argument unless every coordinate lies in (0, 1].
  explicit PseudoSample(std::vector<UnitPair> pairs, std::string source_label = {});

  std::span<const UnitPair> pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  const std::string& source_label() const noexcept { return source_label_; }

private:
  std::vector<UnitPair> pairs_;
  std::string source_label_;
};

/// Pairs inside the empirical MTD rectangle [0, phi] x [0, q^2/phi].
struct RectangleSelection {
  double q = 1.0;
  double phi_star_n = 1.0;
  std::size_t n = 0;                      // size of the parent sample
  std::vector<std::size_t> member_indices;  // ascending, into the parent sample
  std::vector<UnitPair> scaled_pairs;     // (u / phi, v phi / q^2), same order

  std::size_t m_q() const noexcept { return member_indices.size(); }
  double pi_star_n() const noexcept {
    return n == 0 ? 0.0 : static_cast<double>(member_indices.size()) / static_cast<double>(n);
  }
};

/// Pairs inside the square [0, q]^2 with their w = q / max(u, v) values.
struct DiagonalSelection {
  double q = 1.0;
  std::vector<std::size_t> member_indices;  // ascending
  std::vector<double> w_values;            // sorted descending, all >= 1

  std::size_t n_q() const noexcept { return member_indices.size(); }
};

/// Rank transform u_i = rank(x_i) / (n + 1), smallest value gets rank 1,
/// ties broken by first occurrence.
PseudoSample pseudo_observations(std::span<const double> x, std::span<const double> y,
                                 std::string source_label = {});

/// C_n(u, v) = #{i : u_i <= u, v_i <= v} / n.
double empirical_copula(const PseudoSample& sample, double u, double v);

/// Exact maximizer of the step function x -> C_n(x, q^2 / x) on [q^2, 1].
///
/// Pair i covers the closed interval [max(u_i, q^2), min(q^2 / v_i, 1)].  A
/// sweep over interval endpoints finds the maximal count and the segments
/// attaining it; phi_star_n is then the candidate in
/// {u_i} u {q^2 / v_i} u {q^2, 1} (clipped to [q^2, 1]) lying in a maximal
/// segment that is closest to q on the log scale, the smaller x on exact ties.
/// An empty rectangle reports phi_star_n = q.
RectangleSelection mtd_maximizer(const PseudoSample& sample, double q);

DiagonalSelection diagonal_selection(const PseudoSample& sample, double q);

/// F*(u, v) = #{k : u~_k <= u, v~_k <= v} / m_q over the scaled members.
double empirical_fstar(const RectangleSelection& selection, double u, double v);

/// counts[i] = #{k : a_k.u <= a_i.u and a_k.v <= a_i.v}, O(m log m).
std::vector<std::size_t> dominance_counts(std::span<const UnitPair> points);

}  // namespace tailmax
