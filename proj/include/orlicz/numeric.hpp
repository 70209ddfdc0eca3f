#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace orlicz {

/// Points 2^{lo}, ..., 2^{hi} with `per_octave` points per factor of two.
std::vector<double> dyadic_grid(int lo_exp, int hi_exp, int per_octave);

/// `count` points log-uniformly spaced on [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// Neumaier-compensated running sum; the result depends only on the order of add().
class CompensatedSum {
 public:
  void add(double x);
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Adaptive Gauss-Kronrod on [a, b]. Returns the integral estimate.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10);

/// ∫_a^∞ f, integrating on geometrically growing panels until the log-log slope
/// of f certifies that the remainder is below rel_tol of the accumulated value.
/// Returns +inf when the integrand does not decay fast enough by `max_abscissa`.
double integrate_tail(const std::function<double(double)>& f, double a, double rel_tol = 1e-8,
                      double max_abscissa = 1e15);

/// Shortest round-trip decimal text; "inf" for infinity.
std::string format_number(double v);

/// Worker count used by parallel_for (defaults to the hardware concurrency).
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n). Each index is handled exactly once; the
/// partition is contiguous so results never depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace orlicz
