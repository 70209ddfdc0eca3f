#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "orlicz/young.hpp"

namespace orlicz {

/// Uniform cell grid in dimension 1 or 2. Cell (i, j) covers
/// [x0 + i h, x0 + (i+1) h) × [y0 + j h, y0 + (j+1) h); values are row-major (j outer).
struct GridGeometry {
  int dim = 1;
  double h = 1.0;
  double x0 = 0.0;
  double y0 = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 1;

  static GridGeometry line(double h, double x0, std::size_t nx);
  static GridGeometry plane(double h, double x0, double y0, std::size_t nx, std::size_t ny);

  [[nodiscard]] std::size_t size() const { return nx * ny; }
  [[nodiscard]] double cell_measure() const { return dim == 1 ? h : h * h; }
  [[nodiscard]] double center_x(std::size_t i) const { return x0 + (static_cast<double>(i) + 0.5) * h; }
  [[nodiscard]] double center_y(std::size_t j) const { return y0 + (static_cast<double>(j) + 0.5) * h; }
  /// Same box, cells split by `factor` per axis.
  [[nodiscard]] GridGeometry refined(std::size_t factor) const;
  bool operator==(const GridGeometry&) const = default;
};

/// Compactly supported piecewise-constant function; zero outside its grid.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(GridGeometry geometry, std::vector<double> values);

  /// f(x) = fn(cell center) on every cell.
  static GridFunction sample(const GridGeometry& g, const std::function<double(double, double)>& fn);

  [[nodiscard]] const GridGeometry& geometry() const { return geom_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] int dim() const { return geom_.dim; }
  [[nodiscard]] double h() const { return geom_.h; }
  [[nodiscard]] double value(std::size_t i, std::size_t j = 0) const { return values_[j * geom_.nx + i]; }
  /// Value of the cell containing (x, y); 0 outside the grid.
  [[nodiscard]] double value_at(double x, double y = 0.0) const;

  [[nodiscard]] double integral() const;
  [[nodiscard]] double max_abs() const;
  [[nodiscard]] bool is_zero() const;

  [[nodiscard]] GridFunction map(const std::function<double(double)>& fn) const;
  [[nodiscard]] GridFunction scaled(double c) const;
  [[nodiscard]] GridFunction abs() const;
  /// Pointwise product; both functions must share the geometry.
  [[nodiscard]] GridFunction times(const GridFunction& other) const;
  [[nodiscard]] GridFunction plus(const GridFunction& other) const;
  /// Piecewise-constant values at the cell centers of `target`.
  [[nodiscard]] GridFunction resampled(const GridGeometry& target) const;

  bool operator==(const GridFunction&) const = default;

 private:
  GridGeometry geom_;
  std::vector<double> values_;
};

/// ∫Φ(|f|/λ) as an exact cell sum (0·∞ = 0, any ∞ term makes the sum ∞).
double orlicz_modular(const GridFunction& f, const YoungFunction& phi, double lambda);

/// sup_t Φ(t) m(f/λ, t), evaluated exactly over the distinct levels of |f|.
double weak_modular(const GridFunction& f, const YoungFunction& phi, double lambda);

/// inf{λ > 0 : ∫Φ(|f|/λ) ≤ 1}; 0 for f ≡ 0, inf when no λ works.
double luxemburg_norm(const GridFunction& f, const YoungFunction& phi);
double weak_luxemburg_norm(const GridFunction& f, const YoungFunction& phi);

/// |{x : |f(x)| > t}|.
double distribution_function(const GridFunction& f, double t);

/// 1/Φ⁻¹(1/|G|), the norm of a characteristic function of a set of measure |G|.
double exact_char_norm(double measure, const YoungFunction& phi);

// Text format: `1 h x0` or `2 h x0 y0 rows cols`, then one value per line (%.17g).
void write_grid(std::ostream& out, const GridFunction& f);
void write_grid(const std::string& path, const GridFunction& f);
GridFunction read_grid(std::istream& in);
GridFunction read_grid(const std::string& path);
/// CSV `x,f` (1D) or `x,y,f` (2D) at cell centers.
void write_csv(std::ostream& out, const GridFunction& f);

/// Named builtins on a grid: `chi:a=0,b=1` (interval, or square in 2D), `log-abs`, `sign`,
/// `abs-pow:beta=0.5`, `const:c=1`.
GridFunction make_builtin(const std::string& text, const GridGeometry& g);

}  // namespace orlicz
