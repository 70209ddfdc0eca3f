#include "orlicz/numeric.hpp"

#include <algorithm>
#include <charconv>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace orlicz {

std::vector<double> dyadic_grid(int lo_exp, int hi_exp, int per_octave) {
  if (hi_exp < lo_exp || per_octave <= 0) throw std::invalid_argument("dyadic_grid: bad range");
  std::vector<double> out;
  for (int k = lo_exp * per_octave; k <= hi_exp * per_octave; ++k) {
    out.push_back(std::exp2(static_cast<double>(k) / per_octave));
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw std::invalid_argument("log_grid: bad range");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = std::exp(a + step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::isinf(t)) {
    sum_ = t;
    comp_ = 0.0;
    return;
  }
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 15>::integrate(f, a, b, 15, rel_tol);
}

namespace {

// Local log-log slope -d log f / d log s at s > 0.
double decay_exponent(const std::function<double(double)>& f, double s) {
  const double d = 1e-3;
  const double f1 = f(s * std::exp(-d));
  const double f2 = f(s * std::exp(d));
  if (!(f1 > 0.0) || !(f2 > 0.0)) return std::numeric_limits<double>::infinity();
  return -(std::log(f2) - std::log(f1)) / (2.0 * d);
}

}  // namespace

double integrate_tail(const std::function<double(double)>& f, double a, double rel_tol,
                      double max_abscissa) {
  // Panels [a, a+1], then doubling widths measured from max(a, 1) so that
  // polynomially decaying integrands in s are covered in O(log S) panels.
  double total = 0.0;
  double left = a;
  double width = 1.0;
  while (left < max_abscissa) {
    const double right = left + width;
    total += integrate(f, left, right, 1e-11);
    left = right;
    if (left > 1.0) width = left;  // geometric growth once past 1
    const double fr = f(left);
    if (fr == 0.0) return total;
    if (!std::isfinite(fr)) return std::numeric_limits<double>::infinity();
    const double kappa = decay_exponent(f, left);
    if (kappa > 1.0 && left > 0.0) {
      // f(s) ≤ f(S) (S/s)^κ beyond S gives remainder ≤ f(S) S/(κ-1).
      const double remainder = fr * left / (kappa - 1.0);
      if (remainder <= rel_tol * std::abs(total)) return total + remainder;
    }
  }
  return std::numeric_limits<double>::infinity();
}

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned n) { g_threads.store(n); }

unsigned thread_count() {
  const unsigned n = g_threads.load();
  if (n != 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] {
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace orlicz
