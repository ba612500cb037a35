#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

namespace tailmax {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  std::optional<double> stdev;  // sample SD; absent when count < 2
};

Summary summarize(std::span<const double> values);

/// Standard normal cdf, 0.5 * erfc(-x / sqrt(2)).
double normal_cdf(double x) noexcept;

/// Upper tail P(X > x) of a chi-square law with `df` degrees of freedom.
double chi_square_sf(double x, double df);

/// Worker count: `requested` if positive, else TAILMAX_THREADS, else the
/// hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested = 0);

/// Runs body(i) for i in [0, count) on up to `threads` workers.  Each index
/// is executed exactly once; the first exception thrown is rethrown after
/// all workers join.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace tailmax
