#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tailmax/empirical_tail.hpp"

namespace tailmax {

inline constexpr double kDefaultTheta = 1e-6;

/// Box-Cox type transform: (t^theta - 1) / theta, or log t at theta = 0.
double t_theta(double t, double theta);

struct TomdEstimate {
  double value = 0.0;
  double q = 1.0;
  std::size_t m = 1;
  double theta = kDefaultTheta;
  std::uint64_t group_seed = 0;
  std::size_t m_q = 0;
  std::vector<std::vector<std::size_t>> groups;  // member indices into the parent sample
};

struct ToddEstimate {
  double value = 0.0;
  double q = 1.0;
  std::size_t n_q = 0;
};

/// Per-member ratios 2 T_theta(F*(u~_i, v~_i)) / (log u~_i + log v~_i),
/// clamped to [0, 2], in selection order.
std::vector<double> tomd_ratios(const RectangleSelection& selection, double theta);

/// Average block-minima estimator of the tail order of maximal dependence.
///
/// Members are shuffled with an Rng seeded by `group_seed` and cut into
/// consecutive blocks of `m` (the last one possibly shorter); the estimate is
/// the mean over blocks of the smallest ratio in each block.
TomdEstimate tomd_estimate(const RectangleSelection& selection, std::size_t m, double theta,
                           std::uint64_t group_seed);

/// Least-squares tail order of diagonal dependence from the descending w
/// order statistics: minus the slope of log(i - 0.5) on log w_(i).
ToddEstimate todd_estimate(const DiagonalSelection& selection);
double todd_from_order_statistics(std::span<const double> w_descending);

/// (tomd / todd - 1) * 100.
double relative_difference(double tomd, double todd);

}  // namespace tailmax
