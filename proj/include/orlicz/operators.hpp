#pragma once

#include <array>
#include <functional>
#include <map>
#include <variant>
#include <vector>

#include "orlicz/gridfn.hpp"
#include "orlicz/kernels.hpp"

namespace orlicz {

/// Finite search set for sup-over-balls operators: centers on a lattice of the given
/// spacing covering the grid box, radii h, 2h, 4h, ... up to r_max.
struct BallFamily {
  std::vector<double> radii;
  double center_spacing = 0.0;

  /// Spacing h/2; r_max defaults to the grid extent (longest side of the box).
  /// per_octave > 1 inserts h 2^{k/per_octave} between the dyadic radii.
  static BallFamily standard(const GridGeometry& g, double r_max = 0.0, int per_octave = 1);
};

struct DyadicCubeIndex {
  int generation = 0;                // cube side is 2^{-generation}
  std::array<long long, 2> corner{};  // Π [2^{-j} k_i, 2^{-j}(k_i + 1))
  auto operator<=>(const DyadicCubeIndex&) const = default;
};

namespace maximal_variant {
struct HL {};
/// ρ(r) times the mean.
struct Fractional {
  Kernel kernel;
};
/// |B(0, r)|^{α/n} times the mean.
struct FractionalPower {
  double alpha = 0.0;
};
struct Sharp {};
/// w(r) times the mean of |f|.
struct RadialWeight {
  std::function<double(double)> weight;
};
struct Dyadic {};
}  // namespace maximal_variant

using MaximalVariant = std::variant<maximal_variant::HL, maximal_variant::Fractional, maximal_variant::FractionalPower,
                                    maximal_variant::Sharp, maximal_variant::RadialWeight, maximal_variant::Dyadic>;

/// Per-ball values on a BallFamily with O(1) range-max queries for "sup over balls containing x".
class BallField {
 public:
  using BallFn = std::function<double(double cx, double cy, double r, std::size_t radius_index)>;
  BallField(const GridGeometry& g, const BallFamily& balls, const BallFn& fn);

  /// Largest value over balls B(c, r) with |x - c| < r.
  [[nodiscard]] double sup_containing(double x, double y = 0.0) const;

  [[nodiscard]] std::size_t centers_x() const { return ncx_; }
  [[nodiscard]] std::size_t centers_y() const { return ncy_; }
  [[nodiscard]] double center_x(std::size_t m) const { return cx0_ + static_cast<double>(m) * s_; }
  [[nodiscard]] double center_y(std::size_t m) const { return cy0_ + static_cast<double>(m) * s_; }
  [[nodiscard]] double value(std::size_t k, std::size_t mx, std::size_t my = 0) const;
  [[nodiscard]] const std::vector<double>& radii() const { return radii_; }

 private:
  [[nodiscard]] double row_max(std::size_t k, std::size_t my, std::size_t lo, std::size_t hi) const;

  int dim_ = 1;
  double s_ = 0.0;
  double cx0_ = 0.0;
  double cy0_ = 0.0;
  std::size_t ncx_ = 0;
  std::size_t ncy_ = 1;
  std::vector<double> radii_;
  // sparse_[k][level] holds, per center row, max over 2^level consecutive centers.
  std::vector<std::vector<std::vector<double>>> sparse_;
};

/// Sharp and Campanato sups use only balls contained in the grid box, so a function is
/// compared with itself and never with the zero extension outside its grid.

/// Exact ball statistics of a grid function: 1D intervals with partial cells,
/// 2D disks counting a cell iff its center is inside (virtual cells outside the grid count as 0).
class BallStats {
 public:
  explicit BallStats(const GridFunction& f);
  /// Measure used for means: 2r in 1D, number of lattice cells with center inside times h^2 in 2D.
  [[nodiscard]] double measure(double cx, double cy, double r) const;
  [[nodiscard]] double integral(double cx, double cy, double r) const;
  [[nodiscard]] double integral_abs(double cx, double cy, double r) const;
  /// True when the ball lies inside the closed grid box.
  [[nodiscard]] bool contained(double cx, double cy, double r) const;
  [[nodiscard]] double mean(double cx, double cy, double r) const { return integral(cx, cy, r) / measure(cx, cy, r); }
  [[nodiscard]] double mean_abs(double cx, double cy, double r) const {
    return integral_abs(cx, cy, r) / measure(cx, cy, r);
  }
  /// (mean over B of |f - a|^p), brute force over the cells of B.
  [[nodiscard]] double mean_power_deviation(double cx, double cy, double r, double a, double p) const;
  /// Mean oscillation (mean |f - f_B|^p)^{1/p}.
  [[nodiscard]] double oscillation(double cx, double cy, double r, double p) const;

 private:
  template <class Visit>
  void visit_cells(double cx, double cy, double r, const Visit& visit) const;
  [[nodiscard]] double prefix_integral(const std::vector<double>& prefix, std::size_t row, double x) const;
  [[nodiscard]] double disk_sum(const std::vector<double>& prefix, double cx, double cy, double r) const;

  GridFunction f_;
  std::vector<double> prefix_;      // per row, nx + 1 entries
  std::vector<double> prefix_abs_;
};

/// Geometry constant with M_d f ≤ C M f on the standard family: 2 in 1D, max |disk|/|cube| in 2D.
double dyadic_geometry_constant(const GridGeometry& g);

GridFunction maximal(const MaximalVariant& variant, const GridFunction& f, const GridGeometry& eval,
                     const BallFamily& balls);
/// Convenience: standard family, eval on the 2× refined grid.
GridFunction maximal(const MaximalVariant& variant, const GridFunction& f);
std::vector<double> maximal_at(const MaximalVariant& variant, const GridFunction& f,
                               const std::vector<std::array<double, 2>>& points, const BallFamily& balls);

/// The dyadic cubes of side ≥ h meeting the support, with their means of |f|.
std::map<DyadicCubeIndex, double> dyadic_cube_means(const GridFunction& f);

struct FracIntegralOptions {
  double tol = 1e-6;          // relative change that stops far-cell refinement
  double near_fraction = 0.125;  // near field radius as a fraction of the grid extent
  int max_refinements = 6;
};

/// I_ρ f(x) = ∫ ρ(|x-y|)/|x-y|^n f(y) dy. Cells within the near radius (always including
/// the cell containing x) are integrated exactly through ρ*; far cells use a midpoint rule
/// refined 4-fold until the relative change is below tol.
/// Throws std::domain_error("kernel not integrable at 0") when ρ* diverges.
GridFunction frac_integral(const Kernel& k, const GridFunction& f, const GridGeometry& eval,
                           const FracIntegralOptions& opts = {});
GridFunction frac_integral(const Kernel& k, const GridFunction& f, const FracIntegralOptions& opts = {});
std::vector<double> frac_integral_at(const Kernel& k, const GridFunction& f,
                                     const std::vector<std::array<double, 2>>& points,
                                     const FracIntegralOptions& opts = {});

/// [b, I_ρ] f = b I_ρ f - I_ρ(b f); b is read at the evaluation points and at f's cell centers.
GridFunction commutator(const GridFunction& b, const Kernel& k, const GridFunction& f, const GridGeometry& eval,
                        const FracIntegralOptions& opts = {});
GridFunction commutator(const GridFunction& b, const Kernel& k, const GridFunction& f,
                        const FracIntegralOptions& opts = {});

}  // namespace orlicz
