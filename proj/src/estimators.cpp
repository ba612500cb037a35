#include "tailmax/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "tailmax/numeric.hpp"
#include "tailmax/rng.hpp"

namespace tailmax {

double t_theta(double t, double theta) {
  if (!(t > 0.0 && t <= 1.0)) {
    std::ostringstream msg;
    msg << "T_theta argument " << t << " is outside (0,1]";
    throw std::domain_error(msg.str());
  }
  if (!(theta >= 0.0)) throw std::domain_error("theta must be nonnegative");
  if (theta == 0.0) return std::log(t);
  // expm1 keeps (t^theta - 1) / theta accurate as theta -> 0
  return std::expm1(theta * std::log(t)) / theta;
}

std::vector<double> tomd_ratios(const RectangleSelection& selection, double theta) {
  const std::size_t m_q = selection.m_q();
  if (m_q == 0) throw std::invalid_argument("TOMD estimator needs a nonempty rectangle selection");
  const auto counts = dominance_counts(selection.scaled_pairs);
  std::vector<double> ratios(m_q);
  for (std::size_t i = 0; i < m_q; ++i) {
    const double f = static_cast<double>(counts[i]) / static_cast<double>(m_q);
    const double numerator = 2.0 * t_theta(f, theta);
    const double denominator = std::log(selection.scaled_pairs[i].u) + std::log(selection.scaled_pairs[i].v);
    double ratio;
    if (counts[i] == m_q) {
      ratio = 0.0;
    } else if (denominator == 0.0) {
      ratio = 2.0;
    } else {
      ratio = numerator / denominator;
    }
    ratios[i] = std::clamp(ratio, 0.0, 2.0);
  }
  return ratios;
}

TomdEstimate tomd_estimate(const RectangleSelection& selection, std::size_t m, double theta,
                           std::uint64_t group_seed) {
  if (m == 0) throw std::invalid_argument("block size m must be positive");
  const auto ratios = tomd_ratios(selection, theta);

  std::vector<std::size_t> order(ratios.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(group_seed);
  rng.shuffle(std::span<std::size_t>(order));

  TomdEstimate out;
  out.q = selection.q;
  out.m = m;
  out.theta = theta;
  out.group_seed = group_seed;
  out.m_q = ratios.size();

  CompensatedSum sum;
  std::size_t blocks = 0;
  for (std::size_t begin = 0; begin < order.size(); begin += m) {
    const std::size_t end = std::min(begin + m, order.size());
    std::vector<std::size_t> group;
    group.reserve(end - begin);
    double block_min = 2.0;
    for (std::size_t k = begin; k < end; ++k) {
      block_min = std::min(block_min, ratios[order[k]]);
      group.push_back(selection.member_indices[order[k]]);
    }
    sum.add(block_min);
    ++blocks;
    out.groups.push_back(std::move(group));
  }
  out.value = sum.value() / static_cast<double>(blocks);
  return out;
}

double todd_from_order_statistics(std::span<const double> w_descending) {
  const std::size_t n = w_descending.size();
  if (n < 3) {
    throw std::invalid_argument("TODD estimator needs at least 3 pairs in the diagonal square, got " +
                                std::to_string(n));
  }
  std::vector<double> log_w(n);
  CompensatedSum sum;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(w_descending[i] > 0.0)) throw std::domain_error("w values must be positive");
    log_w[i] = std::log(w_descending[i]);
    sum.add(log_w[i]);
  }
  const double mean = sum.value() / static_cast<double>(n);
  CompensatedSum cross;
  CompensatedSum squares;
  for (std::size_t i = 0; i < n; ++i) {
    const double centred = log_w[i] - mean;
    cross.add(centred * std::log(static_cast<double>(i + 1) - 0.5));
    squares.add(centred * centred);
  }
  if (squares.value() == 0.0) throw std::domain_error("TODD regression is degenerate: all w values are equal");
  return -cross.value() / squares.value();
}

ToddEstimate todd_estimate(const DiagonalSelection& selection) {
  ToddEstimate out;
  out.q = selection.q;
  out.n_q = selection.n_q();
  out.value = todd_from_order_statistics(selection.w_values);
  return out;
}

double relative_difference(double tomd, double todd) {
  if (todd == 0.0) throw std::domain_error("relative difference undefined for TODD = 0");
  return (tomd / todd - 1.0) * 100.0;
}

}  // namespace tailmax
