#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orlicz/campanato.hpp"
#include "orlicz/extended.hpp"
#include "orlicz/kernels.hpp"
#include "orlicz/numeric.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

/// IrA: ρ*(r)Φ⁻¹(1/rⁿ) + ∫_r^∞ ρ(t)Φ⁻¹(1/tⁿ)dt/t ≤ A Ψ⁻¹(1/rⁿ).
/// MrA: (sup_{t≤r} ρ)Φ⁻¹(1/rⁿ) ≤ A Ψ⁻¹(1/rⁿ).
/// CommIrA: the IrA left side ≤ A Θ⁻¹(1/rⁿ).  CommMrA: ψ(r)Θ⁻¹(1/rⁿ) ≤ A Ψ⁻¹(1/rⁿ).
enum class ScaleKind { IrA, MrA, CommIrA, CommMrA };

std::string to_string(ScaleKind kind);
/// `ira`, `mra`, `commira`, `commmra`.
ScaleKind parse_scale_kind(const std::string& text);

struct ScaleInputs {
  Kernel rho;
  YoungFunction phi;
  std::optional<YoungFunction> psi;
  std::optional<YoungFunction> theta;
  std::optional<WeightDescriptor> weight;
  int n = 1;
};

struct ScaleConditionReport {
  ScaleKind kind = ScaleKind::IrA;
  Extended fitted_A;
  std::vector<std::pair<double, double>> ratio_profile;  // (r, LHS/RHS)
  bool pass = false;
  double flatness = 0.0;    // max/min ratio over the grid
  double end_factor = 0.0;  // largest end ratio over the median ratio
  std::string detail;
};

/// 2^-120 ... 2^120 with 4 points per octave.
std::vector<double> default_scale_grid();

/// Fails when A is infinite or when, at either end, the 8 outermost ratios increase toward
/// the end and the end ratio is at least 1e3 times the median.
ScaleConditionReport check_scale_condition(ScaleKind kind, const ScaleInputs& in,
                                           const std::vector<double>& r_grid = default_scale_grid());

/// Sweep of Ψ⁻¹(1/rⁿ) ≤ A r^α ψ(r) Φ⁻¹(1/rⁿ) with the same verdict rule.
CheckReport check_lower_bound_hypothesis(double alpha, const YoungFunction& phi, const YoungFunction& psi,
                                         const WeightDescriptor& weight, int n,
                                         const std::vector<double>& r_grid = default_scale_grid());

/// Almost-decreasing constant of r ↦ Ψ⁻¹(1/rⁿ)/(Φ⁻¹(1/rⁿ) rⁿ) on the grid.
double mra_quotient_constant(const YoungFunction& phi, const YoungFunction& psi, int n,
                             const std::vector<double>& r_grid);

struct TargetYoung {
  YoungFunction psi;        // tabulated
  double sandwich_c = 1.0;  // C⁻¹Ψ⁻¹ ≤ r^{-n/s}ρ* ≤ CΨ⁻¹ on the grid
  double epsilon = 0.0;     // certificate: ρ/r^{n/s-ε} almost decreasing
};

/// Tabulated Ψ with Ψ⁻¹(1/rⁿ) = running min of r^{-n/s}ρ*(r) on the grid.
/// Throws std::domain_error when no ε > 0 makes ρ/r^{n/s-ε} almost decreasing (constant ≤ 4).
TargetYoung construct_target_young(double s, const Kernel& rho, int n,
                                   const std::vector<double>& r_grid = dyadic_grid(-40, 40, 4));

/// CSV `r,ratio`.
void write_profile_csv(std::ostream& out, const ScaleConditionReport& report);

}  // namespace orlicz
