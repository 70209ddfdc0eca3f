#pragma once

#include <optional>
#include <string>

#include "orlicz/operators.hpp"
#include "orlicz/report.hpp"

namespace orlicz {

enum class WeightFamily { One, PowerBeta, PowerLogBeta };

/// Weight ψ of a Campanato space. PowerLogBeta is r^β (log 1/r)^{-β1} below 1/e,
/// r^β on [1/e, e] and r^β (log r)^{β1} above e.
class WeightDescriptor {
 public:
  WeightDescriptor() = default;
  static WeightDescriptor one();
  static WeightDescriptor power_beta(double beta);
  static WeightDescriptor power_log_beta(double beta, double beta1);
  /// `one`, `power:beta=0.5`, `powerlog:beta=0.5,beta1=1`.
  static WeightDescriptor parse(const std::string& text);

  [[nodiscard]] double operator()(double r) const;
  [[nodiscard]] WeightFamily family() const { return family_; }
  [[nodiscard]] double beta() const { return beta_; }
  [[nodiscard]] double beta1() const { return beta1_; }
  [[nodiscard]] std::string describe() const;

  /// Almost-increasing constant of ψ, measured on the default kernel grid.
  [[nodiscard]] std::optional<double> almost_increasing_constant() const { return ai_constant_; }
  /// Copy with the almost-increasing constant measured; stays uncertified when it is infinite.
  [[nodiscard]] WeightDescriptor certified() const;

 private:
  WeightFamily family_ = WeightFamily::One;
  double beta_ = 0.0;
  double beta1_ = 0.0;
  std::optional<double> ai_constant_;
};

struct CampanatoEstimate {
  double value = 0.0;  // a lower bound: the sup runs over a finite family
  BallFamily ball_family;
  double p = 1.0;
};

/// sup over family balls inside the grid box of ψ(r)^{-1} (mean over B of |b - b_B|^p)^{1/p}.
CampanatoEstimate campanato_norm(const GridFunction& b, const WeightDescriptor& psi, double p,
                                 const BallFamily& balls);

/// Values clamped to [-k, k].
GridFunction truncate_bounded(const GridFunction& b, double k);

/// Ratio of the p- and 1-estimates; pass iff 1 ≤ ratio ≤ ratio_cap.
/// Throws std::invalid_argument when ψ carries no almost-increasing certificate.
CheckReport check_john_nirenberg(const GridFunction& b, const WeightDescriptor& psi, double p,
                                 const BallFamily& balls, double ratio_cap = 4.0);

/// Smallest C with mean_{B(x,s)} |b - b_{B(x,r)}| ≤ C (1 + log2(s/r)) ‖b‖ over concentric
/// family balls r < s inside the grid box, ‖b‖ the (ψ ≡ 1, p = 1) estimate. 0 for constant b.
double oscillation_growth_constant(const GridFunction& b, const BallFamily& balls);

}  // namespace orlicz
