#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/campanato.hpp"
#include "orlicz/conditions.hpp"
#include "orlicz/gridfn.hpp"
#include "orlicz/kernels.hpp"
#include "orlicz/operators.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

/// Fitted constant over a finite family; pass iff every ratio is finite and the
/// stability factor (max/min ratio, or the controlling factor of the suite) is at most `cap`.
struct FitReport {
  std::string name;
  double fitted = 0.0;
  std::vector<double> member_ratios;
  double stability = 1.0;
  double cap = 2.0;
  bool pass = false;
  std::string detail;
};

enum class FamilyGenerator { DilatedChi, TranslatedBump, RandomStep, CommutatorPair };

struct FamilyMember {
  GridFunction f;
  std::optional<GridFunction> b;
  double parameter = 0.0;
};

/// Deterministic test corpus.
/// DilatedChi: f = χ_[0,λ)^n on the box [-3Λ, 5Λ)^n with `cells` per axis, where Λ = λ when the
/// grid dilates with f and Λ = max λ otherwise.
/// TranslatedBump: f = max(0, 1 - |x - s e₁|) on a box covering every shift with margin 4.
/// RandomStep: `count` functions on [0, 32) with h = 32/cells, supported in [0, 1), constant on
/// dyadic blocks of 1, 2, 4 or 8 cells with values uniform in [-1, 1].
/// CommutatorPair: fixed-grid DilatedChi members with b = make_builtin(b_name) on the same grid.
struct TestFamily {
  FamilyGenerator generator = FamilyGenerator::DilatedChi;
  std::vector<double> parameters;
  int n = 1;
  std::size_t cells = 1024;
  bool dilate_grid = true;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::string b_name;
  std::optional<YoungFunction> normalize;  // rescale each f to unit Luxemburg norm

  static TestFamily dilated_chi(std::vector<double> lambdas, std::size_t cells, bool dilate_grid = true, int n = 1);
  static TestFamily translated_bump(std::vector<double> shifts, std::size_t cells);
  static TestFamily random_step(std::uint64_t seed, std::size_t count, std::size_t cells = 1024);
  static TestFamily commutator_pair(std::string b_name, std::vector<double> lambdas, std::size_t cells);

  [[nodiscard]] std::vector<FamilyMember> members() const;
};

/// 2^lo, ..., 2^hi.
std::vector<double> dyadic_scales(int lo, int hi);

enum class PointwiseKind { Ir, Mr };

/// Minimal C1 with Ψ(|T f|/(C1‖f‖_Φ)) ≤ Φ(M f/(C0‖f‖_Φ)) at the points of the 2× refined grid,
/// T = I_ρ or M_ρ. Throws std::invalid_argument when the matching scale condition fails.
FitReport verify_pointwise_domination(PointwiseKind which, const Kernel& rho, const YoungFunction& phi,
                                      const YoungFunction& psi, const GridFunction& f, double c0);
/// The same fit on every member; stability is max/min of the fitted C1.
FitReport verify_pointwise_family(PointwiseKind which, const Kernel& rho, const YoungFunction& phi,
                                  const YoungFunction& psi, const TestFamily& family, double c0, double cap = 2.0);

enum class OperatorKind { M, MRho, IRho, Commutator };

struct OperatorSpec {
  OperatorKind kind = OperatorKind::M;
  Kernel rho;
  [[nodiscard]] std::string describe() const;
};

/// ‖T f‖_Ψ (weak or strong) / ‖f‖_Φ per member, divided by the Campanato estimate of b
/// for the commutator. Output fields live on the 2× refined member grid.
FitReport verify_operator_norm_family(const OperatorSpec& op, const YoungFunction& phi, const YoungFunction& psi,
                                      const TestFamily& family, bool weak_target, double cap = 2.0);

/// For each (γ, λ): |{M_d f > 2λ, M♯f ≤ γλ}| ≤ slack · 2ⁿγ |{M_d f > λ}|, measured on the
/// 2× refined grid. Ratios are LHS/(2ⁿγ RHS); stability is their maximum and cap is the slack.
/// Throws std::invalid_argument when f is not aligned to the dyadic lattice.
FitReport verify_good_lambda(const GridFunction& f, const std::vector<double>& gammas,
                             const std::vector<double>& lambdas, const BallFamily& balls, double slack = 2.0);

/// Fitted C with M♯([b, I_ρ]f) ≤ C‖b‖ (M_{ψ^η}(|I_ρ f|^η)^{1/η} + M_{(ρ*ψ)^η}(|f|^η)^{1/η})
/// pointwise, per member f. Throws std::invalid_argument when the kernel or weight hypotheses fail.
FitReport verify_sharp_pointwise(const GridFunction& b, const Kernel& rho, const WeightDescriptor& psi,
                                 const std::vector<GridFunction>& fs, double eta = 2.0, double cap = 2.0);
/// ‖M_d f‖_Φ / ‖M♯ f‖_Φ per member. Throws std::invalid_argument when Φ fails Δ₂.
FitReport verify_dyadic_sharp_norm(const std::vector<GridFunction>& fs, const YoungFunction& phi);

struct SharpBoundsReport {
  FitReport pointwise;
  FitReport dyadic_norm;
};
SharpBoundsReport verify_sharp_bounds(const GridFunction& b, const Kernel& rho, const WeightDescriptor& psi,
                                      const YoungFunction& phi, const std::vector<GridFunction>& fs,
                                      double eta = 2.0);

struct ExampleRow {
  std::string name;
  std::string description;
  bool expected = true;
  bool outcome = false;
  std::vector<std::string> checks;
  [[nodiscard]] bool ok() const { return expected == outcome; }
};

struct ExampleSuiteReport {
  std::vector<ExampleRow> rows;
  std::vector<ExampleRow> controls;  // hypotheses violated; expected to fail
  [[nodiscard]] bool ok() const;
};

/// Scale conditions for the built-in example table, with operator norm families where they
/// run at desk scale (`with_operators`).
ExampleSuiteReport run_example_suite(bool with_operators = true);
void write_suite_report(std::ostream& out, const ExampleSuiteReport& report);
void write_fit_report(std::ostream& out, const FitReport& report);

}  // namespace orlicz
