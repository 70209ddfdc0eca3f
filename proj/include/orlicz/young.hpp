#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orlicz/extended.hpp"
#include "orlicz/report.hpp"

namespace orlicz {

enum class YoungFamily {
  Power,          // t^p
  PowerLog,       // t^p (log 1/t)^{-p1} small, t^p (log t)^{p1} large
  ExpPower,       // exp(-t^{-p}) small, exp(t^p) large
  PowerMinusOne,  // max(0, t^p - 1)
  MaxPower,       // max(t^p, t^q)
  StepInfinity,   // 0 on [0, c], inf beyond
  MaxQuadLinear,  // max(t^2, a t - c)
  Tabulated       // monotone breakpoint list
};

/// Young-type function Φ(t) = scale · base(t^θ) on [0, inf].
/// Instances are immutable; every member is const and thread-safe.
class YoungFunction {
 public:
  /// Φ(t) = t.
  YoungFunction() = default;

  static YoungFunction power(double p);
  static YoungFunction power_log(double p, double p1);
  static YoungFunction exp_power(double p);
  static YoungFunction power_minus_one(double p);
  static YoungFunction max_power(double p, double q);
  static YoungFunction step_infinity(double c = 1.0);
  static YoungFunction max_quad_linear(double a, double c);
  /// Breakpoints must have strictly increasing positive t and nondecreasing finite values.
  /// Values are log-log interpolated between positive neighbours and linearly otherwise;
  /// the function is inf for t > b_limit.
  static YoungFunction tabulated(std::vector<double> t, std::vector<double> value,
                                 double b_limit = kInf);

  /// Parses `power:p=2`, `powerlog:p=2,p1=1`, `exppower:p=1`, `stepinf`, `stepinf:c=2`,
  /// `maxpower:p=1,q=2`, `powerminus1:p=2`, `maxquadlin:a=3,c=2`, `table:<file>`.
  /// Every family also accepts `scale=`.
  static YoungFunction parse(const std::string& text);

  [[nodiscard]] YoungFunction scaled(double factor) const;
  /// t ↦ Φ(t^θ).
  [[nodiscard]] YoungFunction composed(double theta) const;

  [[nodiscard]] double operator()(double t) const;
  [[nodiscard]] Extended eval(Extended t) const;

  /// inf{t ≥ 0 : Φ(t) > u}.
  [[nodiscard]] double inverse(double u) const;
  [[nodiscard]] Extended inverse(Extended u) const;
  [[nodiscard]] bool inverse_is_closed_form() const;

  [[nodiscard]] double a_phi() const;
  [[nodiscard]] double b_phi() const;

  /// Secant slopes on a 16-per-octave grid over [2^-30, 2^30] (restricted to [0, b)) are nondecreasing.
  [[nodiscard]] bool is_convex() const;

  [[nodiscard]] YoungFamily family() const { return family_; }
  [[nodiscard]] double p() const { return p_; }
  [[nodiscard]] double q() const { return q_; }
  [[nodiscard]] double scale() const { return scale_; }
  [[nodiscard]] double theta() const { return theta_; }
  [[nodiscard]] const std::vector<double>& table_t() const { return tab_t_; }
  [[nodiscard]] const std::vector<double>& table_value() const { return tab_v_; }
  [[nodiscard]] std::string describe() const;

 private:
  [[nodiscard]] double base(double s) const;
  [[nodiscard]] double base_inverse(double w) const;
  [[nodiscard]] double tab_eval(double s) const;
  [[nodiscard]] double base_a() const;
  [[nodiscard]] double base_b() const;

  YoungFamily family_ = YoungFamily::Power;
  double p_ = 1.0;
  double q_ = 1.0;
  double scale_ = 1.0;
  double theta_ = 1.0;
  std::vector<double> tab_t_;
  std::vector<double> tab_v_;
  double tab_b_ = kInf;
};

/// inf{t : Φ(t) > u} by monotone bisection; the lower endpoint is returned.
double bisect_inverse(const YoungFunction& phi, double u);

/// Legendre-type conjugate sup_u (t u - Φ(u)). Closed form for Power and StepInfinity,
/// otherwise a 512-point tabulation from golden-section maximization.
/// Throws std::invalid_argument when Φ is not convex.
YoungFunction complementary(const YoungFunction& phi);

/// Log-dyadic grid 2^-30..2^30 with 4 points per octave.
std::vector<double> default_t_grid();

CheckReport check_delta2(const YoungFunction& phi, const std::vector<double>& t_grid);

std::vector<double> default_k_candidates();

/// Smallest candidate k with Φ(t) ≤ Φ(k t)/(2k) on every grid t.
CheckReport check_nabla2(const YoungFunction& phi, const std::vector<double>& t_grid,
                         const std::vector<double>& k_candidates);

struct PowerComposition {
  double theta = 1.0;
  double k = 0.0;
  YoungFunction composed;
  CheckReport composed_nabla2;
};

/// θ at the boundary of k^{2(1/θ-1)} ≤ 2 (or the forced value) and t ↦ Φ(t^θ).
/// Throws std::invalid_argument when Φ fails the ∇₂ check.
PowerComposition power_compose_nabla2(const YoungFunction& phi,
                                      std::optional<double> forced_theta = std::nullopt);

/// sup Φ'(2t)/Φ'(t) from finite differences. Throws std::invalid_argument unless Φ passes Δ₂.
CheckReport check_derivative_doubling(const YoungFunction& phi, const std::vector<double>& t_grid);

}  // namespace orlicz
