#pragma once

// Analytic copulas with closed-form paths of maximal tail dependence (MTD).
//
// For a copula C and a level q in (0,1], the MTD path picks the corner
// (phi*(q), q^2 / phi*(q)) of the area-q^2 rectangle anchored at the origin
// that carries the most mass.  The families here have closed forms for the
// path and for the tail order kappa* of Pi*(q) = C(phi*(q), psi*(q)), so
// they serve as exact oracles for the empirical machinery.

#include <string>
#include <variant>

namespace tailmax {

struct Independence {};

/// C(u,v) = min(u^(1-a) v, u v^(1-b)), a, b in [0,1].
struct MarshallOlkin {
  double a = 0.0;
  double b = 0.0;
};

/// C(u,v) = u^(g1/g*) (u^(-1/g*) + v^(-1/g0) - 1)^(-g0), g* = g0 + g1.
struct GeneralizedClayton {
  double gamma0 = 1.0;
  double gamma1 = 0.0;
  double gamma_star() const noexcept { return gamma0 + gamma1; }
};

class CopulaModel {
public:
  using Family = std::variant<Independence, MarshallOlkin, GeneralizedClayton>;

  static CopulaModel independence() noexcept;
  /// a = b = 0 yields the independence copula.
  static CopulaModel marshall_olkin(double a, double b);
  static CopulaModel generalized_clayton(double gamma0, double gamma1);

  const Family& family() const noexcept { return family_; }
  std::string name() const;

private:
  explicit CopulaModel(Family family) : family_(family) {}
  Family family_;
};

/// Closed-form copula value.  Throws std::domain_error unless u, v in [0,1].
double copula_value(const CopulaModel& model, double u, double v);

/// Closed-form MTD path of one model.
class MtdOracle {
public:
  explicit MtdOracle(const CopulaModel& model);

  const CopulaModel& model() const noexcept { return model_; }

  /// Tail order of maximal dependence kappa*, in [1, 2].
  double tomd() const noexcept { return tomd_; }

  double phi_star(double q) const;
  double psi_star(double q) const;
  double pi_star(double q) const;

  /// Scaled rectangle law F_q*(u,v) = C(u phi*(q), v psi*(q)) / Pi*(q).
  double fstar(double q, double u, double v) const;

private:
  CopulaModel model_;
  double tomd_;
};

inline MtdOracle mtd_oracle(const CopulaModel& model) { return MtdOracle(model); }

/// Limit of F_q* as q -> 0 for the generalized Clayton copula.
double gc_f0_star(double gamma0, double gamma1, double u, double v);

/// Maximizer q^(2 g*/(g* + g0)) of x -> F_0*(x, q^2/x).
double gc_f0_argmax(double gamma0, double gamma1, double q);

/// Log-space residual of the implicit equation defining the generalized
/// Clayton phi*(q):
///   x^(-1/g0) (x^(-1/g*) - g1/g*) = (1 - g1/g*) q^(-2/g0).
/// Zero at the root, decreasing in x on [q^2, 1].
double gc_phi_star_residual(double gamma0, double gamma1, double q, double x);

/// Brute-force maximizer of x -> C(x, q^2/x) over x in [q^2, 1]: a log-spaced
/// grid of `resolution` points (plus x = q), refined by golden-section search
/// around the best grid point.  A flat profile returns x = q.  Test oracle.
double numeric_phi_star(const CopulaModel& model, double q, int resolution = 1000);

}  // namespace tailmax
