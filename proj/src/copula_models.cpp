#include "tailmax/copula_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace tailmax {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_unit(double u, const char* what) {
  if (!(u >= 0.0 && u <= 1.0)) {
    std::ostringstream msg;
    msg << what << " = " << u << " is outside [0,1]";
    throw std::domain_error(msg.str());
  }
}

void require_level(double q) {
  if (!(q > 0.0 && q <= 1.0)) {
    std::ostringstream msg;
    msg << "q = " << q << " is outside (0,1]";
    throw std::domain_error(msg.str());
  }
}

void require_gc(double gamma0, double gamma1) {
  if (!(gamma0 > 0.0) || !(gamma1 >= 0.0) || !std::isfinite(gamma0) || !std::isfinite(gamma1)) {
    throw std::invalid_argument("generalized Clayton needs gamma0 > 0 and gamma1 >= 0");
  }
}

// log(e^a + e^b - 1) for a, b >= 0.
double log_sum_exp_minus_one(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m) - std::exp(-m));
}

double gc_log_value(const GeneralizedClayton& gc, double log_u, double log_v) {
  const double gs = gc.gamma_star();
  return (gc.gamma1 / gs) * log_u -
         gc.gamma0 * log_sum_exp_minus_one(-log_u / gs, -log_v / gc.gamma0);
}

double gc_solve_log_phi_star(const GeneralizedClayton& gc, double q) {
  const double log_q = std::log(q);
  double lo = 2.0 * log_q;  // residual >= 0
  double hi = 0.0;          // residual <= 0
  const auto residual = [&](double lx) {
    return gc_phi_star_residual(gc.gamma0, gc.gamma1, q, std::exp(lx));
  };
  for (int iter = 0; iter < 400 && lo < hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (residual(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(residual(lo)) <= std::abs(residual(hi)) ? lo : hi;
}

}  // namespace

CopulaModel CopulaModel::independence() noexcept { return CopulaModel(Independence{}); }

CopulaModel CopulaModel::marshall_olkin(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0) || !(b >= 0.0 && b <= 1.0)) {
    throw std::invalid_argument("Marshall-Olkin parameters must lie in [0,1]");
  }
  if (a == 0.0 && b == 0.0) return independence();
  return CopulaModel(MarshallOlkin{a, b});
}

CopulaModel CopulaModel::generalized_clayton(double gamma0, double gamma1) {
  require_gc(gamma0, gamma1);
  return CopulaModel(GeneralizedClayton{gamma0, gamma1});
}

std::string CopulaModel::name() const {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const Independence&) { out << "Independence"; },
                 [&](const MarshallOlkin& mo) { out << "MarshallOlkin(" << mo.a << "," << mo.b << ")"; },
                 [&](const GeneralizedClayton& gc) {
                   out << "GeneralizedClayton(" << gc.gamma0 << "," << gc.gamma1 << ")";
                 },
             },
             family_);
  return out.str();
}

double copula_value(const CopulaModel& model, double u, double v) {
  require_unit(u, "u");
  require_unit(v, "v");
  if (u == 0.0 || v == 0.0) return 0.0;
  const double lu = std::log(u);
  const double lv = std::log(v);
  return std::visit(overloaded{
                        [&](const Independence&) { return u * v; },
                        [&](const MarshallOlkin& mo) {
                          return std::exp(std::min((1.0 - mo.a) * lu + lv, lu + (1.0 - mo.b) * lv));
                        },
                        [&](const GeneralizedClayton& gc) {
                          return std::min(1.0, std::exp(gc_log_value(gc, lu, lv)));
                        },
                    },
                    model.family());
}

MtdOracle::MtdOracle(const CopulaModel& model)
    : model_(model),
      tomd_(std::visit(overloaded{
                           [](const Independence&) { return 2.0; },
                           [](const MarshallOlkin& mo) { return 2.0 - 2.0 * mo.a * mo.b / (mo.a + mo.b); },
                           [](const GeneralizedClayton& gc) {
                             return 1.0 + gc.gamma1 / (gc.gamma1 + 2.0 * gc.gamma0);
                           },
                       },
                       model.family())) {}

double MtdOracle::phi_star(double q) const {
  require_level(q);
  const double log_q = std::log(q);
  return std::visit(overloaded{
                        [&](const Independence&) { return q; },
                        [&](const MarshallOlkin& mo) { return std::exp(2.0 * mo.b / (mo.a + mo.b) * log_q); },
                        [&](const GeneralizedClayton& gc) { return std::exp(gc_solve_log_phi_star(gc, q)); },
                    },
                    model_.family());
}

double MtdOracle::psi_star(double q) const {
  const double phi = phi_star(q);
  return std::min(1.0, std::exp(2.0 * std::log(q) - std::log(phi)));
}

double MtdOracle::pi_star(double q) const {
  require_level(q);
  if (std::holds_alternative<MarshallOlkin>(model_.family())) {
    return std::exp(tomd_ * std::log(q));
  }
  return copula_value(model_, phi_star(q), psi_star(q));
}

double MtdOracle::fstar(double q, double u, double v) const {
  require_unit(u, "u");
  require_unit(v, "v");
  const double pi = copula_value(model_, phi_star(q), psi_star(q));
  return copula_value(model_, u * phi_star(q), v * psi_star(q)) / pi;
}

double gc_f0_star(double gamma0, double gamma1, double u, double v) {
  require_gc(gamma0, gamma1);
  require_unit(u, "u");
  require_unit(v, "v");
  if (u == 0.0 || v == 0.0) return 0.0;
  const double gs = gamma0 + gamma1;
  const double c = gamma1 / gs;
  const double a = -std::log(u) / gs;
  const double b = -std::log(v) / gamma0;
  const double m = std::max(a, b);
  const double log_inner = m + std::log((1.0 - c) * std::exp(a - m) + std::exp(b - m)) - std::log(2.0 - c);
  return std::min(1.0, std::exp(c * std::log(u) - gamma0 * log_inner));
}

double gc_f0_argmax(double gamma0, double gamma1, double q) {
  require_gc(gamma0, gamma1);
  require_level(q);
  const double gs = gamma0 + gamma1;
  return std::exp(2.0 * gs / (gs + gamma0) * std::log(q));
}

double gc_phi_star_residual(double gamma0, double gamma1, double q, double x) {
  require_gc(gamma0, gamma1);
  require_level(q);
  if (!(x > 0.0 && x <= 1.0)) throw std::domain_error("phi* candidate must lie in (0,1]");
  const double gs = gamma0 + gamma1;
  const double c = gamma1 / gs;
  const double lx = std::log(x);
  const double t = -lx / gs;
  // log(e^t - c) = t + log1p(-c e^-t), finite since c < 1 <= e^t
  const double log_lhs = -lx / gamma0 + t + std::log1p(-c * std::exp(-t));
  const double log_rhs = std::log1p(-c) - 2.0 * std::log(q) / gamma0;
  return log_lhs - log_rhs;
}

double numeric_phi_star(const CopulaModel& model, double q, int resolution) {
  require_level(q);
  if (resolution < 100) throw std::invalid_argument("numeric_phi_star: resolution must be >= 100");
  const double log_q = std::log(q);
  const double lo = 2.0 * log_q;
  if (lo == 0.0) return 1.0;

  const auto profile = [&](double lx) {
    const double x = std::exp(lx);
    const double y = std::min(1.0, std::exp(2.0 * log_q - lx));
    return copula_value(model, std::min(1.0, x), y);
  };

  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(resolution) + 1);
  for (int k = 0; k < resolution; ++k) {
    grid.push_back(lo * (1.0 - static_cast<double>(k) / (resolution - 1)));
  }
  grid.push_back(log_q);
  std::sort(grid.begin(), grid.end());

  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) values[k] = profile(grid[k]);
  const double best = *std::max_element(values.begin(), values.end());
  const double tie_floor = best * (1.0 - 1e-12);

  std::size_t arg = 0;
  std::size_t tied = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (values[k] < tie_floor) continue;
    ++tied;
    if (tied == 1 || std::abs(grid[k] - log_q) < std::abs(grid[arg] - log_q)) arg = k;
  }
  if (tied > 1) return std::exp(grid[arg]);

  double a = grid[arg == 0 ? 0 : arg - 1];
  double b = grid[std::min(arg + 1, grid.size() - 1)];
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = profile(c);
  double fd = profile(d);
  while (b - a > 1e-13) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = profile(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = profile(d);
    }
  }
  return std::exp(0.5 * (a + b));
}

}  // namespace tailmax
