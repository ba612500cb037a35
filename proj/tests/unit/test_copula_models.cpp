#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "tailmax/copula_models.hpp"

using namespace tailmax;

// Reference values computed independently with mpmath at 50 digits.
TEST(CopulaValue, GeneralizedClaytonOracle) {
  const auto gc1 = CopulaModel::generalized_clayton(0.4, 0.2);
  EXPECT_NEAR(copula_value(gc1, 0.25, 0.25), 0.14251606847667780145, 1e-14);
  const auto gc2 = CopulaModel::generalized_clayton(0.4, 0.8);
  EXPECT_NEAR(copula_value(gc2, 0.3, 0.7), 0.25322351053976361094, 1e-14);
}

TEST(CopulaValue, BoundaryAndMargins) {
  for (const auto& model : {CopulaModel::generalized_clayton(0.4, 0.8), CopulaModel::marshall_olkin(0.3, 0.6),
                            CopulaModel::independence()}) {
    for (double t : {0.0, 0.1, 0.5, 0.9, 1.0}) {
      EXPECT_NEAR(copula_value(model, t, 1.0), t, 1e-13) << model.name();
      EXPECT_NEAR(copula_value(model, 1.0, t), t, 1e-13) << model.name();
      EXPECT_NEAR(copula_value(model, 0.0, t), 0.0, 1e-15) << model.name();
    }
  }
}

TEST(CopulaValue, MarshallOlkinClosedForm) {
  const auto mo = CopulaModel::marshall_olkin(0.25, 0.75);
  const double u = 0.3, v = 0.6;
  EXPECT_NEAR(copula_value(mo, u, v), std::min(std::pow(u, 0.75) * v, u * std::pow(v, 0.25)), 1e-15);
  EXPECT_EQ(CopulaModel::marshall_olkin(0.0, 0.0).name(), CopulaModel::independence().name());
}

TEST(CopulaValue, RejectsOutsideUnitSquare) {
  const auto gc = CopulaModel::generalized_clayton(0.4, 0.8);
  EXPECT_THROW(copula_value(gc, -0.1, 0.5), std::domain_error);
  EXPECT_THROW(copula_value(gc, 0.5, 1.2), std::domain_error);
  EXPECT_THROW(CopulaModel::marshall_olkin(1.5, 0.2), std::invalid_argument);
  EXPECT_THROW(CopulaModel::generalized_clayton(0.0, 0.2), std::invalid_argument);
}

// 2-increasing: every rectangle receives nonnegative mass.
TEST(CopulaValue, TwoIncreasingOnGrid) {
  for (const auto& model : {CopulaModel::generalized_clayton(0.1, 0.8), CopulaModel::generalized_clayton(0.4, 0.2),
                            CopulaModel::marshall_olkin(0.5, 0.5), CopulaModel::marshall_olkin(0.25, 1.0)}) {
    constexpr int k = 40;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        const double u0 = double(i) / k, u1 = double(i + 1) / k, v0 = double(j) / k, v1 = double(j + 1) / k;
        const double mass = copula_value(model, u1, v1) - copula_value(model, u0, v1) -
                            copula_value(model, u1, v0) + copula_value(model, u0, v0);
        ASSERT_GE(mass, -1e-14) << model.name() << " at " << i << "," << j;
      }
    }
  }
}

TEST(MtdOracle, MarshallOlkinClosedForms) {
  for (double a : {0.25, 0.5, 0.75, 1.0}) {
    for (double b : {0.25, 0.5, 0.75, 1.0}) {
      const MtdOracle oracle(CopulaModel::marshall_olkin(a, b));
      EXPECT_NEAR(oracle.tomd(), 2.0 - 2.0 * a * b / (a + b), 1e-15);
      for (double q : {0.01, 0.05, 0.1}) {
        EXPECT_NEAR(oracle.phi_star(q), std::pow(q, 2.0 * b / (a + b)), 1e-15);
        EXPECT_NEAR(oracle.pi_star(q), std::pow(q, 2.0 - 2.0 * a * b / (a + b)), 1e-12);
        EXPECT_NEAR(oracle.phi_star(q) * oracle.psi_star(q), q * q, 1e-16);
      }
    }
  }
}

TEST(MtdOracle, MarshallOlkinPhiStarValue) {
  EXPECT_NEAR(MtdOracle(CopulaModel::marshall_olkin(1.0, 0.5)).phi_star(0.05), 0.1357208808297453336, 1e-15);
}

TEST(MtdOracle, IndependenceIsFlat) {
  const MtdOracle oracle(CopulaModel::independence());
  EXPECT_DOUBLE_EQ(oracle.tomd(), 2.0);
  EXPECT_DOUBLE_EQ(oracle.phi_star(0.1), 0.1);
  EXPECT_NEAR(oracle.pi_star(0.1), 0.01, 1e-17);
  EXPECT_NEAR(numeric_phi_star(CopulaModel::independence(), 0.1), 0.1, 1e-15);
}

TEST(MtdOracle, GeneralizedClaytonTailOrder) {
  EXPECT_NEAR(MtdOracle(CopulaModel::generalized_clayton(0.1, 0.8)).tomd(), 1.0 + 0.8 / 1.0, 1e-15);
  EXPECT_NEAR(MtdOracle(CopulaModel::generalized_clayton(0.4, 0.8)).tomd(), 1.0 + 0.8 / 1.6, 1e-15);
  EXPECT_NEAR(MtdOracle(CopulaModel::generalized_clayton(0.4, 0.2)).tomd(), 1.0 + 0.2 / 1.0, 1e-15);
}

struct PhiCase {
  double g0, g1, q, phi;
};

// Roots of the implicit equation computed with mpmath findroot at 50 digits.
TEST(MtdOracle, GeneralizedClaytonPhiStarTable) {
  const PhiCase cases[] = {
      {0.1, 0.8, 0.01, 0.00030610998603430457}, {0.1, 0.8, 0.05, 0.0055452293198362935},
      {0.1, 0.8, 0.1, 0.019295102365961588},    {0.1, 0.8, 0.25, 0.099859921525607896},
      {0.4, 0.8, 0.01, 0.0013892315473378631},  {0.4, 0.8, 0.05, 0.015448081349628470},
      {0.4, 0.8, 0.1, 0.043313970175872104},    {0.4, 0.8, 0.25, 0.16558834924086531},
      {0.4, 0.2, 0.01, 0.0043879110590389576},  {0.4, 0.2, 0.05, 0.030263819944304848},
      {0.4, 0.2, 0.1, 0.069478931425795260},    {0.4, 0.2, 0.25, 0.20760120669776414},
  };
  for (const auto& c : cases) {
    const MtdOracle oracle(CopulaModel::generalized_clayton(c.g0, c.g1));
    const double phi = oracle.phi_star(c.q);
    EXPECT_NEAR(phi / c.phi, 1.0, 1e-12) << c.g0 << "," << c.g1 << " q=" << c.q;
    EXPECT_LE(std::abs(gc_phi_star_residual(c.g0, c.g1, c.q, phi)), 1e-10);
    EXPECT_NEAR(numeric_phi_star(CopulaModel::generalized_clayton(c.g0, c.g1), c.q) / c.phi, 1.0, 1e-6);
  }
}

TEST(MtdOracle, NumericPhiStarMatchesMarshallOlkin) {
  for (double a : {0.25, 0.5, 0.75, 1.0}) {
    for (double b : {0.25, 0.5, 0.75, 1.0}) {
      for (double q : {0.01, 0.05, 0.1}) {
        EXPECT_LE(std::abs(numeric_phi_star(CopulaModel::marshall_olkin(a, b), q) - std::pow(q, 2 * b / (a + b))),
                  1e-6)
            << a << "," << b << "," << q;
      }
    }
  }
}

TEST(MtdOracle, FstarDominatesIndependence) {
  for (const auto& model : {CopulaModel::generalized_clayton(0.1, 0.8), CopulaModel::generalized_clayton(0.4, 0.2),
                            CopulaModel::marshall_olkin(0.5, 0.5), CopulaModel::marshall_olkin(0.75, 0.25)}) {
    const MtdOracle oracle(model);
    for (double q : {0.05, 0.1, 0.25}) {
      EXPECT_NEAR(oracle.fstar(q, 1.0, 1.0), 1.0, 1e-12);
      for (int i = 1; i <= 20; ++i) {
        for (int j = 1; j <= 20; ++j) {
          const double u = i / 20.0, v = j / 20.0;
          ASSERT_GE(oracle.fstar(q, u, v), u * v - 1e-12) << model.name() << " q=" << q;
        }
      }
    }
  }
}

TEST(GcLimit, F0StarOracle) {
  EXPECT_NEAR(gc_f0_star(0.4, 0.8, 0.3, 0.7), 0.310068611883045099, 1e-14);
  EXPECT_NEAR(gc_f0_star(0.4, 0.0, 0.5, 0.5), 0.5, 1e-15);
}

TEST(GcLimit, ArgmaxMaximizesProfile) {
  const double q = 0.05, g0 = 0.4, g1 = 0.8;
  const double x0 = gc_f0_argmax(g0, g1, q);
  EXPECT_NEAR(x0, std::pow(q, 2.0 * 1.2 / 1.6), 1e-15);
  const double best = gc_f0_star(g0, g1, x0, q * q / x0);
  for (double f : {0.5, 0.8, 0.95, 1.05, 1.2, 2.0}) {
    const double x = x0 * f;
    EXPECT_LE(gc_f0_star(g0, g1, x, q * q / x), best + 1e-15);
  }
}
