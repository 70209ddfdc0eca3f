#pragma once

#include <memory>
#include <string>
#include <vector>

#include "orlicz/extended.hpp"
#include "orlicz/report.hpp"

namespace orlicz {

enum class KernelFamily {
  PowerAlpha,      // r^α
  LogKernel,       // (log 1/r)^{-(α+1)} small, (log r)^{α-1} large
  MaxLogKernel,    // (log 1/r)^{-α} small, (log r)^{α} large
  PowerLogKernel,  // r^α (log 1/r)^{-α1} small, r^α (log r)^{α1} large
  PowerExpCut,     // r^α small, e^{-r} large
  Tabulated,       // breakpoint list, right-continuous at repeated r
  RunningSup       // sup_{t ≤ r} of another kernel
};

/// Kernel ρ : (0, ∞) → (0, ∞). Piecewise families are defined literally on (0, 1/e]
/// and [e, ∞) and bridged by log-log linear interpolation on [1/e, e].
class Kernel {
 public:
  /// ρ ≡ 1.
  Kernel() = default;

  static Kernel power_alpha(double alpha);
  static Kernel log_kernel(double alpha);
  static Kernel max_log(double alpha);
  static Kernel power_log(double alpha, double alpha1);
  static Kernel power_exp_cut(double alpha);
  /// r nondecreasing and positive, each r at most twice (a jump); values positive.
  static Kernel tabulated(std::vector<double> r, std::vector<double> value);

  /// `power:alpha=0.5`, `logker:alpha=1`, `maxlog:alpha=1`, `powerlog:alpha=0.5,alpha1=1`,
  /// `powerexp:alpha=0.5`, `table:<file>`.
  static Kernel parse(const std::string& text);

  /// r ↦ sup_{t ≤ r} ρ(t), the sup taken over the lattice 2^{k/16} (k ≥ -1280) and r itself.
  [[nodiscard]] Kernel running_sup() const;

  [[nodiscard]] double operator()(double r) const;

  /// ρ*(r) = ∫_0^r ρ(t)/t dt; +inf when the integral diverges at 0.
  [[nodiscard]] double rho_star(double r) const;
  [[nodiscard]] Extended rho_star_ext(double r) const { return Extended(rho_star(r)); }
  [[nodiscard]] bool integrable_at_zero() const;

  /// Points where ρ has a kink or jump; quadratures split there.
  [[nodiscard]] std::vector<double> breakpoints() const;

  [[nodiscard]] KernelFamily family() const { return family_; }
  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] double alpha1() const { return alpha1_; }
  [[nodiscard]] std::string describe() const;

 private:
  [[nodiscard]] double tab_eval(double r) const;
  [[nodiscard]] double tab_rho_star(double r) const;
  [[nodiscard]] double numeric_rho_star(double r) const;

  KernelFamily family_ = KernelFamily::PowerAlpha;
  double alpha_ = 0.0;
  double alpha1_ = 0.0;
  std::vector<double> tab_r_;
  std::vector<double> tab_v_;
  std::shared_ptr<const Kernel> base_;
  std::shared_ptr<const std::vector<double>> prefix_max_;
};

/// Log-dyadic grid 2^-60..2^60 with 4 points per octave.
std::vector<double> default_kernel_grid();

/// max_{r<s} g(s)/g(r) over consecutive grid points, i.e. the almost-decreasing constant of g.
double almost_decreasing_constant(const std::vector<double>& values);
/// max_{r<s} g(r)/g(s), the almost-increasing constant.
double almost_increasing_constant(const std::vector<double>& values);

struct KernelConditions {
  CheckReport integrable;          // ∫_0^1 ρ(t)/t dt < ∞
  CheckReport sup_doubling;        // sup_{[r,2r]} ρ ≤ C ∫_{r/2}^{r} ρ(t)/t dt, C ≤ 2^{n+2}
  CheckReport lipschitz;           // |ρ(r)/r^n - ρ(s)/s^n| ≤ C |r-s| ρ*(r)/r^{n+1}
  CheckReport almost_decreasing;   // ρ(r)/r^{n-ε}
  CheckReport propagation;         // ρ*(r)/r^{n-ε}, against the bound 1 + C^2
  CheckReport rho_star_doubling;   // ρ*(2r) ≤ C ρ*(r)
  double epsilon = 0.0;
  double k1 = 0.5;
  double k2 = 1.0;
};

KernelConditions check_kernel_conditions(const Kernel& k, int n, const std::vector<double>& r_grid);

/// Almost-decreasing constant of ρ(r)/r^{exponent} on the grid.
double kernel_power_ratio_constant(const Kernel& k, double exponent, const std::vector<double>& r_grid);

}  // namespace orlicz
