#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace orlicz {

/// A value in [0, ∞]. Infinity is stored explicitly as IEEE +inf.
///
/// Arithmetic follows the conventions used for Orlicz modulars: x + ∞ = ∞ and
/// 0 · ∞ = 0 (a null set where the integrand is infinite contributes nothing).
class Extended {
 public:
  constexpr Extended() = default;
  constexpr Extended(double v) : value_(v) {  // NOLINT(google-explicit-constructor)
    if (!(v >= 0.0)) throw std::domain_error("Extended: value must be nonnegative");
  }

  static constexpr Extended infinity() {
    Extended e;
    e.value_ = std::numeric_limits<double>::infinity();
    return e;
  }

  [[nodiscard]] constexpr double value() const { return value_; }
  [[nodiscard]] constexpr bool is_infinite() const {
    return value_ == std::numeric_limits<double>::infinity();
  }
  [[nodiscard]] constexpr bool is_finite() const { return !is_infinite(); }

  constexpr auto operator<=>(const Extended&) const = default;

  friend constexpr Extended operator+(Extended a, Extended b) {
    Extended r;
    r.value_ = a.value_ + b.value_;
    return r;
  }
  friend constexpr Extended operator*(Extended a, Extended b) {
    if (a.value_ == 0.0 || b.value_ == 0.0) return Extended{};
    Extended r;
    r.value_ = a.value_ * b.value_;
    return r;
  }

  friend std::ostream& operator<<(std::ostream& os, Extended e) {
    if (e.is_infinite()) return os << "inf";
    return os << e.value_;
  }

 private:
  double value_ = 0.0;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// 0·∞ = 0 product on raw doubles.
inline double ext_mul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

}  // namespace orlicz
