#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "tailmax/empirical_tail.hpp"
#include "tailmax/rng.hpp"

using namespace tailmax;

namespace {

std::size_t brute_count(std::span<const UnitPair> pts, double x, double y) {
  std::size_t c = 0;
  for (const auto& p : pts) c += (p.u <= x && p.v <= y) ? 1 : 0;
  return c;
}

// Pairs in [0, x] x [0, q^2 / x], with the v-bound written as x <= q^2 / v
// like the maximizer's intervals.
std::size_t rectangle_count(std::span<const UnitPair> pts, double x, double q2) {
  std::size_t c = 0;
  for (const auto& p : pts) c += (p.u <= x && x <= q2 / p.v) ? 1 : 0;
  return c;
}

PseudoSample random_sample(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.normal();
    y[i] = 0.6 * x[i] + 0.8 * rng.normal();
  }
  return pseudo_observations(x, y);
}

}  // namespace

TEST(PseudoObservations, RanksOverNPlusOne) {
  const std::vector<double> x{3.0, 1.0, 2.0};
  const std::vector<double> y{10.0, 30.0, 20.0};
  const auto s = pseudo_observations(x, y, "xy");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_DOUBLE_EQ(s.pairs()[0].u, 0.75);
  EXPECT_DOUBLE_EQ(s.pairs()[1].u, 0.25);
  EXPECT_DOUBLE_EQ(s.pairs()[2].u, 0.5);
  EXPECT_DOUBLE_EQ(s.pairs()[0].v, 0.25);
  EXPECT_EQ(s.source_label(), "xy");
}

TEST(PseudoObservations, TiesBrokenByFirstOccurrence) {
  const std::vector<double> x{1.0, 1.0, 0.0};
  const std::vector<double> y{0.0, 1.0, 2.0};
  const auto s = pseudo_observations(x, y);
  EXPECT_DOUBLE_EQ(s.pairs()[0].u, 0.5);
  EXPECT_DOUBLE_EQ(s.pairs()[1].u, 0.75);
  EXPECT_DOUBLE_EQ(s.pairs()[2].u, 0.25);
}

TEST(PseudoObservations, InvariantUnderMonotoneTransforms) {
  Rng rng(11);
  std::vector<double> x(200), y(200), fx(200), fy(200);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.normal();
    y[i] = rng.normal() + x[i];
    fx[i] = std::exp(x[i]);
    fy[i] = y[i] * y[i] * y[i] + 5.0;
  }
  const auto a = pseudo_observations(x, y);
  const auto b = pseudo_observations(fx, fy);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(a.pairs()[i], b.pairs()[i]);
  EXPECT_EQ(mtd_maximizer(a, 0.2).member_indices, mtd_maximizer(b, 0.2).member_indices);
}

TEST(PseudoObservations, Errors) {
  const std::vector<double> x{1.0, 2.0};
  const std::vector<double> y{1.0};
  EXPECT_THROW(pseudo_observations(x, y), std::invalid_argument);
  const std::vector<double> nan{1.0, std::nan("")};
  EXPECT_THROW(pseudo_observations(x, nan), std::invalid_argument);
  EXPECT_THROW(PseudoSample({{0.0, 0.5}}), std::invalid_argument);
}

TEST(EmpiricalCopula, CountsInclusive) {
  const PseudoSample s({{0.25, 0.5}, {0.5, 0.25}, {0.75, 0.75}});
  EXPECT_DOUBLE_EQ(empirical_copula(s, 0.5, 0.5), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(empirical_copula(s, 0.25, 0.5), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(empirical_copula(s, 1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(empirical_copula(s, 0.1, 1.0), 0.0);
  EXPECT_THROW(empirical_copula(s, 1.5, 0.5), std::domain_error);
}

TEST(DominanceCounts, MatchesBruteForceWithTies) {
  Rng rng(4);
  std::vector<UnitPair> pts(300);
  for (auto& p : pts) p = {(1 + rng.below(20)) / 20.0, (1 + rng.below(20)) / 20.0};
  const auto counts = dominance_counts(pts);
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(counts[i], brute_count(pts, pts[i].u, pts[i].v));
}

// Brute force: the best count over a dense set of x values including every
// breakpoint must equal the returned m_q, and phi_star_n must attain it.
TEST(MtdMaximizer, AgreesWithBruteForceOnSmallSamples) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 5 + seed % 46;
    const auto s = random_sample(n, seed);
    for (double q : {0.15, 0.3, 0.5}) {
      const double q2 = q * q;
      std::vector<double> xs{q2, 1.0};
      for (const auto& p : s.pairs()) {
        xs.push_back(std::clamp(p.u, q2, 1.0));
        xs.push_back(std::clamp(q2 / p.v, q2, 1.0));
      }
      std::size_t best = 0;
      for (double x : xs) best = std::max(best, rectangle_count(s.pairs(), x, q2));
      const auto sel = mtd_maximizer(s, q);
      ASSERT_EQ(sel.m_q(), best) << "seed " << seed << " q " << q;
      ASSERT_GE(sel.phi_star_n, q2);
      ASSERT_LE(sel.phi_star_n, 1.0);
      ASSERT_EQ(rectangle_count(s.pairs(), sel.phi_star_n, q2), best);
      // Members are exactly the pairs inside the rectangle, ascending.
      std::vector<std::size_t> inside;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& p = s.pairs()[i];
        if (p.u <= sel.phi_star_n && sel.phi_star_n <= q2 / p.v) inside.push_back(i);
      }
      ASSERT_EQ(sel.member_indices, inside);
      EXPECT_NEAR(sel.pi_star_n(), double(best) / double(n), 1e-15);
    }
  }
}

TEST(MtdMaximizer, ScaledPairsLieInUnitSquare) {
  const auto s = random_sample(2000, 77);
  const auto sel = mtd_maximizer(s, 0.1);
  ASSERT_GT(sel.m_q(), 0u);
  for (std::size_t k = 0; k < sel.m_q(); ++k) {
    const auto& p = s.pairs()[sel.member_indices[k]];
    EXPECT_DOUBLE_EQ(sel.scaled_pairs[k].u, p.u / sel.phi_star_n);
    EXPECT_LE(sel.scaled_pairs[k].u, 1.0);
    EXPECT_LE(sel.scaled_pairs[k].v, 1.0);
    EXPECT_GT(sel.scaled_pairs[k].v, 0.0);
  }
}

TEST(MtdMaximizer, MonotoneInQ) {
  const auto s = random_sample(3000, 5);
  std::size_t prev = 0;
  for (double q : {0.02, 0.05, 0.1, 0.2, 0.4, 0.8, 1.0}) {
    const auto m = mtd_maximizer(s, q).m_q();
    EXPECT_GE(m, prev);
    prev = m;
  }
  EXPECT_EQ(mtd_maximizer(s, 1.0).m_q(), s.size());
}

TEST(MtdMaximizer, EmptyRectangleReportsQ) {
  const PseudoSample s({{0.9, 0.9}, {0.8, 0.95}});
  const auto sel = mtd_maximizer(s, 0.1);
  EXPECT_EQ(sel.m_q(), 0u);
  EXPECT_DOUBLE_EQ(sel.phi_star_n, 0.1);
  EXPECT_THROW(mtd_maximizer(s, 0.0), std::domain_error);
}

TEST(DiagonalSelection, SquareMembersAndW) {
  const PseudoSample s({{0.05, 0.02}, {0.2, 0.01}, {0.08, 0.1}, {0.5, 0.5}});
  const auto d = diagonal_selection(s, 0.1);
  EXPECT_EQ(d.member_indices, (std::vector<std::size_t>{0, 2}));
  ASSERT_EQ(d.w_values.size(), 2u);
  EXPECT_DOUBLE_EQ(d.w_values[0], 0.1 / 0.05);
  EXPECT_DOUBLE_EQ(d.w_values[1], 1.0);
}

TEST(EmpiricalFstar, StepFunctionOfScaledMembers) {
  const auto s = random_sample(5000, 8);
  const auto sel = mtd_maximizer(s, 0.1);
  EXPECT_DOUBLE_EQ(empirical_fstar(sel, 1.0, 1.0), 1.0);
  double prev = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double f = empirical_fstar(sel, i / 10.0, i / 10.0);
    EXPECT_GE(f, prev);
    prev = f;
  }
}
