#pragma once

// Multivariate portmanteau white-noise diagnostics for a bivariate series.
//
// With demeaned observations e_t and lag-l autocovariances
// C_l = n^-1 sum_{t>l} e_t e_{t-l}^T, and T_l = tr(C_l^T C_0^-1 C_l C_0^-1):
//
//   BoxPierceMV  n sum_l T_l                          chi2(k^2 L)
//   LjungBoxMV   n (n+2) sum_l T_l / (n - l)          chi2(k^2 L)
//   Hosking      n^2 sum_l T_l / (n - l)              chi2(k^2 L)
//   LiMcLeod     n sum_l T_l + k^2 L (L+1) / (2n)     chi2(k^2 L)
//   MahdiMcLeod  -3n / (2L+1) log det R_L             chi2(3 k^2 L (L+1) / (2 (2L+1)))
//
// where R_L is the (L+1)k square block-Toeplitz matrix of the standardized
// lag matrices R(l) = W^T C_l W, W W^T = C_0^-1 (so R(0) = I).

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tailmax {

enum class PortmanteauKind { BoxPierceMV, LjungBoxMV, Hosking, LiMcLeod, MahdiMcLeod };

inline constexpr std::array<PortmanteauKind, 5> kAllPortmanteauKinds{
    PortmanteauKind::BoxPierceMV, PortmanteauKind::LjungBoxMV, PortmanteauKind::Hosking,
    PortmanteauKind::LiMcLeod, PortmanteauKind::MahdiMcLeod};

std::string to_string(PortmanteauKind kind);

struct PortmanteauResult {
  PortmanteauKind test_kind = PortmanteauKind::Hosking;
  std::size_t lag = 1;
  double statistic = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

struct PortmanteauSuite {
  std::vector<PortmanteauResult> results;  // grouped by test, lags 1..max_lag
  double alpha = 0.05;
  /// Share (in percent) of all (test, lag) p-values above alpha.
  double retained_percent_pooled = 0.0;
  /// Same share within each test, in kAllPortmanteauKinds order.
  std::array<double, 5> retained_percent_by_test{};
};

/// Requires x.size() == y.size() >= 5 * max_lag and a nonsingular lag-0
/// covariance; throws std::invalid_argument / std::domain_error otherwise.
PortmanteauSuite portmanteau_suite(std::span<const double> x, std::span<const double> y, std::size_t max_lag,
                                   double alpha = 0.05);

}  // namespace tailmax
