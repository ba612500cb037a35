#include "tailmax/portmanteau.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "tailmax/numeric.hpp"

namespace tailmax {

namespace {

using Mat2 = Eigen::Matrix2d;

Mat2 autocovariance(const Eigen::Matrix<double, Eigen::Dynamic, 2>& e, std::size_t lag) {
  const auto n = e.rows();
  const auto l = static_cast<Eigen::Index>(lag);
  Mat2 c = e.bottomRows(n - l).transpose() * e.topRows(n - l);
  return c / static_cast<double>(n);
}

}  // namespace

std::string to_string(PortmanteauKind kind) {
  switch (kind) {
    case PortmanteauKind::BoxPierceMV: return "BoxPierce";
    case PortmanteauKind::LjungBoxMV: return "LjungBox";
    case PortmanteauKind::Hosking: return "Hosking";
    case PortmanteauKind::LiMcLeod: return "LiMcLeod";
    case PortmanteauKind::MahdiMcLeod: return "MahdiMcLeod";
  }
  return "?";
}

PortmanteauSuite portmanteau_suite(std::span<const double> x, std::span<const double> y, std::size_t max_lag,
                                   double alpha) {
  if (x.size() != y.size()) throw std::invalid_argument("portmanteau: series lengths differ");
  if (max_lag < 1) throw std::invalid_argument("portmanteau: max_lag must be positive");
  if (x.size() < 5 * max_lag) {
    throw std::invalid_argument("portmanteau: series of length " + std::to_string(x.size()) +
                                " is too short for max_lag " + std::to_string(max_lag) + " (need " +
                                std::to_string(5 * max_lag) + ")");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("portmanteau: alpha must lie in (0,1)");

  const auto n = static_cast<Eigen::Index>(x.size());
  const double nd = static_cast<double>(x.size());
  constexpr double k2 = 4.0;  // k^2 for a bivariate series

  Eigen::Matrix<double, Eigen::Dynamic, 2> e(n, 2);
  for (Eigen::Index t = 0; t < n; ++t) {
    e(t, 0) = x[static_cast<std::size_t>(t)];
    e(t, 1) = y[static_cast<std::size_t>(t)];
  }
  e.rowwise() -= e.colwise().mean();

  const Mat2 c0 = autocovariance(e, 0);
  const double scale = c0.trace();
  if (!(scale > 0.0) || !(c0(0, 0) > 0.0) || !(c0(1, 1) > 0.0) ||
      std::abs(c0.determinant()) <= 1e-12 * scale * scale) {
    throw std::domain_error("portmanteau: lag-0 covariance matrix is singular");
  }
  const Mat2 c0_inv = c0.inverse();
  // W with W^T C0 W = I; standardized lag matrices R(l) = W^T C_l W.
  const Mat2 w = Eigen::LLT<Mat2>(c0_inv).matrixL();

  std::vector<Mat2> correlation(max_lag + 1);
  correlation[0] = Mat2::Identity();

  PortmanteauSuite suite;
  suite.alpha = alpha;
  std::vector<PortmanteauResult> by_kind[5];
  CompensatedSum sum_plain, sum_weighted;
  for (std::size_t l = 1; l <= max_lag; ++l) {
    const Mat2 cl = autocovariance(e, l);
    correlation[l] = w.transpose() * cl * w;
    const double term = (cl.transpose() * c0_inv * cl * c0_inv).trace();
    sum_plain.add(term);
    sum_weighted.add(term / (nd - static_cast<double>(l)));

    const double ld = static_cast<double>(l);
    const double df = k2 * ld;
    const double bp = nd * sum_plain.value();
    const double lb = nd * (nd + 2.0) * sum_weighted.value();
    const double hosking = nd * nd * sum_weighted.value();
    const double lm = bp + k2 * ld * (ld + 1.0) / (2.0 * nd);
    by_kind[0].push_back({PortmanteauKind::BoxPierceMV, l, bp, df, chi_square_sf(bp, df)});
    by_kind[1].push_back({PortmanteauKind::LjungBoxMV, l, lb, df, chi_square_sf(lb, df)});
    by_kind[2].push_back({PortmanteauKind::Hosking, l, hosking, df, chi_square_sf(hosking, df)});
    by_kind[3].push_back({PortmanteauKind::LiMcLeod, l, lm, df, chi_square_sf(lm, df)});

    // Block-Toeplitz matrix of order l: block (i, j) = R(j - i), R(-h) = R(h)^T.
    const auto order = static_cast<Eigen::Index>(2 * (l + 1));
    Eigen::MatrixXd r(order, order);
    for (std::size_t i = 0; i <= l; ++i) {
      for (std::size_t j = 0; j <= l; ++j) {
        const Mat2 block = j >= i ? correlation[j - i] : Mat2(correlation[i - j].transpose());
        r.block<2, 2>(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(2 * j)) = block;
      }
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(r);
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < order; ++i) log_det += std::log(std::abs(ldlt.vectorD()(i)));
    const double mm = -3.0 * nd / (2.0 * ld + 1.0) * log_det;
    const double mm_df = 3.0 * k2 * ld * (ld + 1.0) / (2.0 * (2.0 * ld + 1.0));
    by_kind[4].push_back({PortmanteauKind::MahdiMcLeod, l, mm, mm_df, chi_square_sf(mm, mm_df)});
  }

  std::size_t retained_total = 0;
  for (std::size_t k = 0; k < 5; ++k) {
    std::size_t retained = 0;
    for (const auto& r : by_kind[k]) {
      retained += r.p_value > alpha ? 1 : 0;
      suite.results.push_back(r);
    }
    retained_total += retained;
    suite.retained_percent_by_test[k] = 100.0 * static_cast<double>(retained) / static_cast<double>(max_lag);
  }
  suite.retained_percent_pooled =
      100.0 * static_cast<double>(retained_total) / static_cast<double>(5 * max_lag);
  return suite;
}

}  // namespace tailmax
