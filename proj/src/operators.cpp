#include "orlicz/operators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "orlicz/numeric.hpp"

namespace orlicz {

namespace {

double extent(const GridGeometry& g) {
  double e = static_cast<double>(g.nx) * g.h;
  if (g.dim == 2) e = std::max(e, static_cast<double>(g.ny) * g.h);
  return e;
}

// Indices m of lattice points base + m*s with lo < base + m*s < hi, clipped to [0, count).
bool open_range(double base, double s, std::size_t count, double lo, double hi, std::size_t& first,
                std::size_t& last) {
  const double a = std::floor((lo - base) / s) + 1.0;
  const double b = std::ceil((hi - base) / s) - 1.0;
  const double lo_m = std::max(a, 0.0);
  const double hi_m = std::min(b, static_cast<double>(count) - 1.0);
  if (lo_m > hi_m) return false;
  first = static_cast<std::size_t>(lo_m);
  last = static_cast<std::size_t>(hi_m);
  return true;
}

// Cell index range [i0, i1] (unclipped) whose centers x0 + (i + 1/2) h satisfy |center - c| < w.
bool open_cell_range(double x0, double h, double c, double w, long long& i0, long long& i1) {
  i0 = static_cast<long long>(std::floor((c - w - x0) / h - 0.5)) + 1;
  i1 = static_cast<long long>(std::ceil((c + w - x0) / h - 0.5)) - 1;
  return i0 <= i1;
}

}  // namespace

BallFamily BallFamily::standard(const GridGeometry& g, double r_max, int per_octave) {
  if (g.size() == 0) throw std::invalid_argument("empty grid");
  if (per_octave < 1) throw std::invalid_argument("per_octave must be positive");
  if (r_max <= 0.0) r_max = extent(g);
  BallFamily b;
  b.center_spacing = g.h / 2.0;
  for (int k = 0;; ++k) {
    const double r = g.h * std::exp2(static_cast<double>(k) / per_octave);
    if (r > r_max * (1.0 + 1e-12)) break;
    b.radii.push_back(k % per_octave == 0 ? g.h * std::ldexp(1.0, k / per_octave) : r);
  }
  if (b.radii.empty()) b.radii.push_back(g.h);
  return b;
}

// ---------------------------------------------------------------------------------------------
// BallField

BallField::BallField(const GridGeometry& g, const BallFamily& balls, const BallFn& fn)
    : dim_(g.dim), s_(balls.center_spacing), cx0_(g.x0), cy0_(g.y0), radii_(balls.radii) {
  if (radii_.empty()) throw std::invalid_argument("ball family has no radii");
  if (!(s_ > 0.0)) throw std::invalid_argument("ball family needs a positive center spacing");
  for (double r : radii_)
    if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
  ncx_ = static_cast<std::size_t>(std::floor(static_cast<double>(g.nx) * g.h / s_ + 1e-9)) + 1;
  ncy_ = dim_ == 2 ? static_cast<std::size_t>(std::floor(static_cast<double>(g.ny) * g.h / s_ + 1e-9)) + 1 : 1;
  const std::size_t levels = static_cast<std::size_t>(std::bit_width(ncx_));
  sparse_.assign(radii_.size(), {});
  for (std::size_t k = 0; k < radii_.size(); ++k) {
    auto& table = sparse_[k];
    table.assign(levels, std::vector<double>(ncx_ * ncy_, 0.0));
    auto& base = table[0];
    const double r = radii_[k];
    parallel_for(ncy_, [&](std::size_t my) {
      const double cy = dim_ == 2 ? center_y(my) : 0.0;
      for (std::size_t mx = 0; mx < ncx_; ++mx) base[my * ncx_ + mx] = fn(center_x(mx), cy, r, k);
    });
    for (std::size_t l = 1; l < levels; ++l) {
      const std::size_t half = std::size_t{1} << (l - 1);
      const auto& prev = table[l - 1];
      auto& cur = table[l];
      for (std::size_t my = 0; my < ncy_; ++my)
        for (std::size_t mx = 0; mx + (std::size_t{1} << l) <= ncx_; ++mx)
          cur[my * ncx_ + mx] = std::max(prev[my * ncx_ + mx], prev[my * ncx_ + mx + half]);
    }
  }
}

double BallField::value(std::size_t k, std::size_t mx, std::size_t my) const {
  return sparse_.at(k)[0].at(my * ncx_ + mx);
}

double BallField::row_max(std::size_t k, std::size_t my, std::size_t lo, std::size_t hi) const {
  const std::size_t len = hi - lo + 1;
  const std::size_t l = static_cast<std::size_t>(std::bit_width(len)) - 1;
  const auto& t = sparse_[k][l];
  return std::max(t[my * ncx_ + lo], t[my * ncx_ + hi + 1 - (std::size_t{1} << l)]);
}

double BallField::sup_containing(double x, double y) const {
  double best = 0.0;
  for (std::size_t k = 0; k < radii_.size(); ++k) {
    const double r = radii_[k];
    if (dim_ == 1) {
      std::size_t lo = 0, hi = 0;
      if (open_range(cx0_, s_, ncx_, x - r, x + r, lo, hi)) best = std::max(best, row_max(k, 0, lo, hi));
      continue;
    }
    std::size_t rlo = 0, rhi = 0;
    if (!open_range(cy0_, s_, ncy_, y - r, y + r, rlo, rhi)) continue;
    for (std::size_t my = rlo; my <= rhi; ++my) {
      const double dy = center_y(my) - y;
      const double w2 = r * r - dy * dy;
      if (w2 <= 0.0) continue;
      const double w = std::sqrt(w2);
      std::size_t lo = 0, hi = 0;
      if (open_range(cx0_, s_, ncx_, x - w, x + w, lo, hi)) best = std::max(best, row_max(k, my, lo, hi));
    }
  }
  return best;
}

// ---------------------------------------------------------------------------------------------
// BallStats

BallStats::BallStats(const GridFunction& f) : f_(f) {
  const auto& g = f_.geometry();
  const double cm = g.cell_measure();
  prefix_.assign(g.ny * (g.nx + 1), 0.0);
  prefix_abs_.assign(g.ny * (g.nx + 1), 0.0);
  for (std::size_t j = 0; j < g.ny; ++j) {
    CompensatedSum s, sa;
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double v = f_.value(i, j);
      s.add(v * cm);
      sa.add(std::abs(v) * cm);
      prefix_[j * (g.nx + 1) + i + 1] = s.value();
      prefix_abs_[j * (g.nx + 1) + i + 1] = sa.value();
    }
  }
}

double BallStats::prefix_integral(const std::vector<double>& prefix, std::size_t row, double x) const {
  const auto& g = f_.geometry();
  const std::size_t base = row * (g.nx + 1);
  if (x <= g.x0) return 0.0;
  const double u = (x - g.x0) / g.h;
  if (u >= static_cast<double>(g.nx)) return prefix[base + g.nx];
  const auto i = static_cast<std::size_t>(u);
  const double part = prefix[base + i + 1] - prefix[base + i];
  return prefix[base + i] + (u - static_cast<double>(i)) * part;
}

double BallStats::disk_sum(const std::vector<double>& prefix, double cx, double cy, double r) const {
  const auto& g = f_.geometry();
  long long j0 = 0, j1 = 0;
  if (!open_cell_range(g.y0, g.h, cy, r, j0, j1)) return 0.0;
  j0 = std::max(j0, 0LL);
  j1 = std::min(j1, static_cast<long long>(g.ny) - 1);
  CompensatedSum s;
  for (long long j = j0; j <= j1; ++j) {
    const double dy = g.center_y(static_cast<std::size_t>(j)) - cy;
    const double w2 = r * r - dy * dy;
    if (w2 <= 0.0) continue;
    long long i0 = 0, i1 = 0;
    if (!open_cell_range(g.x0, g.h, cx, std::sqrt(w2), i0, i1)) continue;
    i0 = std::max(i0, 0LL);
    i1 = std::min(i1, static_cast<long long>(g.nx) - 1);
    if (i0 > i1) continue;
    const std::size_t base = static_cast<std::size_t>(j) * (g.nx + 1);
    s.add(prefix[base + static_cast<std::size_t>(i1) + 1] - prefix[base + static_cast<std::size_t>(i0)]);
  }
  return s.value();
}

double BallStats::measure(double cx, double cy, double r) const {
  const auto& g = f_.geometry();
  if (g.dim == 1) return 2.0 * r;
  long long j0 = 0, j1 = 0;
  if (!open_cell_range(g.y0, g.h, cy, r, j0, j1)) return 0.0;
  long long count = 0;
  for (long long j = j0; j <= j1; ++j) {
    const double dy = g.y0 + (static_cast<double>(j) + 0.5) * g.h - cy;
    const double w2 = r * r - dy * dy;
    if (w2 <= 0.0) continue;
    long long i0 = 0, i1 = 0;
    if (open_cell_range(g.x0, g.h, cx, std::sqrt(w2), i0, i1)) count += i1 - i0 + 1;
  }
  return static_cast<double>(count) * g.h * g.h;
}

double BallStats::integral(double cx, double cy, double r) const {
  if (f_.dim() == 1) return prefix_integral(prefix_, 0, cx + r) - prefix_integral(prefix_, 0, cx - r);
  return disk_sum(prefix_, cx, cy, r);
}

double BallStats::integral_abs(double cx, double cy, double r) const {
  if (f_.dim() == 1) return prefix_integral(prefix_abs_, 0, cx + r) - prefix_integral(prefix_abs_, 0, cx - r);
  return disk_sum(prefix_abs_, cx, cy, r);
}

bool BallStats::contained(double cx, double cy, double r) const {
  const auto& g = f_.geometry();
  const double x1 = g.x0 + static_cast<double>(g.nx) * g.h;
  if (cx - r < g.x0 || cx + r > x1) return false;
  if (g.dim == 1) return true;
  const double y1 = g.y0 + static_cast<double>(g.ny) * g.h;
  return cy - r >= g.y0 && cy + r <= y1;
}

template <class Visit>
void BallStats::visit_cells(double cx, double cy, double r, const Visit& visit) const {
  const auto& g = f_.geometry();
  if (g.dim == 1) {
    const double lo = cx - r;
    const double hi = cx + r;
    long long i0 = static_cast<long long>(std::floor((lo - g.x0) / g.h));
    long long i1 = static_cast<long long>(std::ceil((hi - g.x0) / g.h)) - 1;
    i0 = std::max(i0, 0LL);
    i1 = std::min(i1, static_cast<long long>(g.nx) - 1);
    for (long long i = i0; i <= i1; ++i) {
      const double a = g.x0 + static_cast<double>(i) * g.h;
      const double w = std::min(a + g.h, hi) - std::max(a, lo);
      if (w > 0.0) visit(f_.value(static_cast<std::size_t>(i)), w);
    }
    return;
  }
  long long j0 = 0, j1 = 0;
  if (!open_cell_range(g.y0, g.h, cy, r, j0, j1)) return;
  j0 = std::max(j0, 0LL);
  j1 = std::min(j1, static_cast<long long>(g.ny) - 1);
  const double cm = g.h * g.h;
  for (long long j = j0; j <= j1; ++j) {
    const double dy = g.center_y(static_cast<std::size_t>(j)) - cy;
    const double w2 = r * r - dy * dy;
    if (w2 <= 0.0) continue;
    long long i0 = 0, i1 = 0;
    if (!open_cell_range(g.x0, g.h, cx, std::sqrt(w2), i0, i1)) continue;
    i0 = std::max(i0, 0LL);
    i1 = std::min(i1, static_cast<long long>(g.nx) - 1);
    for (long long i = i0; i <= i1; ++i)
      visit(f_.value(static_cast<std::size_t>(i), static_cast<std::size_t>(j)), cm);
  }
}

double BallStats::mean_power_deviation(double cx, double cy, double r, double a, double p) const {
  const double total = measure(cx, cy, r);
  if (!(total > 0.0)) return 0.0;
  CompensatedSum s;
  CompensatedSum covered;
  visit_cells(cx, cy, r, [&](double v, double w) {
    const double d = std::abs(v - a);
    s.add(w * (p == 1.0 ? d : std::pow(d, p)));
    covered.add(w);
  });
  const double outside = std::max(0.0, total - covered.value());
  if (outside > 0.0 && a != 0.0) s.add(outside * (p == 1.0 ? std::abs(a) : std::pow(std::abs(a), p)));
  return s.value() / total;
}

double BallStats::oscillation(double cx, double cy, double r, double p) const {
  double lo = kInf, hi = -kInf, covered = 0.0;
  visit_cells(cx, cy, r, [&](double v, double w) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    covered += w;
  });
  // A ball on which f takes one value has zero oscillation; its computed mean may still be off by rounding.
  if (lo == hi && (lo == 0.0 || covered >= measure(cx, cy, r) * (1.0 - 1e-12))) return 0.0;
  const double m = mean_power_deviation(cx, cy, r, mean(cx, cy, r), p);
  return p == 1.0 ? m : std::pow(m, 1.0 / p);
}

// ---------------------------------------------------------------------------------------------
// Maximal operators

double dyadic_geometry_constant(const GridGeometry& g) {
  if (g.dim == 1) return 2.0;
  // Cube of side s = h 2^g centered on the lattice inside the disk of radius s at its center.
  double worst = 1.0;
  const GridFunction probe(GridGeometry::plane(g.h, 0.0, 0.0, 1, 1), {0.0});
  const BallStats stats(probe);
  for (int gen = 0; gen <= 12; ++gen) {
    const double s = g.h * std::ldexp(1.0, gen);
    const double c = s / 2.0;
    worst = std::max(worst, stats.measure(c, c, s) / (s * s));
  }
  return worst;
}

namespace {

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Sum of |f| per dyadic cube, one table per generation (cube side h 2^gen).
struct DyadicTables {
  double h = 1.0;
  int dim = 1;
  std::vector<double> side;
  std::vector<long long> kx0, ky0, nkx, nky;
  std::vector<std::vector<double>> sum;

  explicit DyadicTables(const GridFunction& f) {
    const auto& g = f.geometry();
    dim = g.dim;
    h = g.h;
    int e = 0;
    if (std::frexp(h, &e) != 0.5) throw std::invalid_argument("dyadic maximal needs h a power of two");
    const double ox = g.x0 / h;
    const double oy = g.dim == 2 ? g.y0 / h : 0.0;
    if (ox != std::floor(ox) || oy != std::floor(oy))
      throw std::invalid_argument("dyadic maximal needs a grid origin on the h lattice");
    const auto cx0 = static_cast<long long>(ox);
    const auto cy0 = static_cast<long long>(oy);
    const auto nx = static_cast<long long>(g.nx);
    const auto ny = static_cast<long long>(g.ny);
    double reach = std::max(std::abs(g.x0), std::abs(g.x0 + static_cast<double>(g.nx) * h));
    if (g.dim == 2) reach = std::max({reach, std::abs(g.y0), std::abs(g.y0 + static_cast<double>(g.ny) * h)});
    const double cm = g.cell_measure();
    for (int gen = 0;; ++gen) {
      const long long w = 1LL << gen;
      const double s = h * static_cast<double>(w);
      const long long ax = floor_div(cx0, w), bx = floor_div(cx0 + nx - 1, w);
      const long long ay = g.dim == 2 ? floor_div(cy0, w) : 0, by = g.dim == 2 ? floor_div(cy0 + ny - 1, w) : 0;
      side.push_back(s);
      kx0.push_back(ax);
      ky0.push_back(ay);
      nkx.push_back(bx - ax + 1);
      nky.push_back(by - ay + 1);
      std::vector<double> tab(static_cast<std::size_t>((bx - ax + 1) * (by - ay + 1)), 0.0);
      for (long long j = 0; j < ny; ++j)
        for (long long i = 0; i < nx; ++i) {
          const long long kx = floor_div(cx0 + i, w) - ax;
          const long long ky = g.dim == 2 ? floor_div(cy0 + j, w) - ay : 0;
          tab[static_cast<std::size_t>(ky * (bx - ax + 1) + kx)] +=
              std::abs(f.value(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) * cm;
        }
      sum.push_back(std::move(tab));
      if (s >= reach || gen > 60) break;
    }
  }

  [[nodiscard]] double cube_mean(std::size_t gen, double x, double y) const {
    const double s = side[gen];
    const auto kx = static_cast<long long>(std::floor(x / s)) - kx0[gen];
    const auto ky = dim == 2 ? static_cast<long long>(std::floor(y / s)) - ky0[gen] : 0;
    if (kx < 0 || kx >= nkx[gen] || ky < 0 || ky >= nky[gen]) return 0.0;
    const double vol = dim == 2 ? s * s : s;
    return sum[gen][static_cast<std::size_t>(ky * nkx[gen] + kx)] / vol;
  }

  [[nodiscard]] double sup(double x, double y) const {
    double best = 0.0;
    for (std::size_t gen = 0; gen < side.size(); ++gen) best = std::max(best, cube_mean(gen, x, y));
    return best;
  }
};

std::function<double(double, double)> maximal_evaluator(const MaximalVariant& variant, const GridFunction& f,
                                                        const BallFamily& balls) {
  if (std::holds_alternative<maximal_variant::Dyadic>(variant)) {
    auto tables = std::make_shared<DyadicTables>(f);
    return [tables](double x, double y) { return tables->sup(x, y); };
  }
  auto stats = std::make_shared<BallStats>(f);
  const int n = f.dim();
  BallField::BallFn fn;
  if (std::holds_alternative<maximal_variant::HL>(variant)) {
    fn = [stats](double cx, double cy, double r, std::size_t) { return stats->mean_abs(cx, cy, r); };
  } else if (const auto* fr = std::get_if<maximal_variant::Fractional>(&variant)) {
    const Kernel k = fr->kernel;
    fn = [stats, k](double cx, double cy, double r, std::size_t) { return k(r) * stats->mean_abs(cx, cy, r); };
  } else if (const auto* fp = std::get_if<maximal_variant::FractionalPower>(&variant)) {
    const double alpha = fp->alpha;
    fn = [stats, alpha, n](double cx, double cy, double r, std::size_t) {
      const double vol = n == 1 ? 2.0 * r : std::numbers::pi * r * r;
      return std::pow(vol, alpha / n) * stats->mean_abs(cx, cy, r);
    };
  } else if (std::holds_alternative<maximal_variant::Sharp>(variant)) {
    fn = [stats](double cx, double cy, double r, std::size_t) {
      return stats->contained(cx, cy, r) ? stats->oscillation(cx, cy, r, 1.0) : 0.0;
    };
  } else {
    const auto& rw = std::get<maximal_variant::RadialWeight>(variant);
    const auto w = rw.weight;
    fn = [stats, w](double cx, double cy, double r, std::size_t) { return w(r) * stats->mean_abs(cx, cy, r); };
  }
  auto field = std::make_shared<BallField>(f.geometry(), balls, fn);
  return [field](double x, double y) { return field->sup_containing(x, y); };
}

}  // namespace

std::map<DyadicCubeIndex, double> dyadic_cube_means(const GridFunction& f) {
  const DyadicTables t(f);
  std::map<DyadicCubeIndex, double> out;
  for (std::size_t gen = 0; gen < t.side.size(); ++gen) {
    int e = 0;
    std::frexp(t.side[gen], &e);
    const double vol = t.dim == 2 ? t.side[gen] * t.side[gen] : t.side[gen];
    for (long long ky = 0; ky < t.nky[gen]; ++ky)
      for (long long kx = 0; kx < t.nkx[gen]; ++kx) {
        const double s = t.sum[gen][static_cast<std::size_t>(ky * t.nkx[gen] + kx)];
        if (s == 0.0) continue;
        DyadicCubeIndex idx;
        idx.generation = 1 - e;
        idx.corner = {t.kx0[gen] + kx, t.dim == 2 ? t.ky0[gen] + ky : 0};
        out[idx] = s / vol;
      }
  }
  return out;
}

GridFunction maximal(const MaximalVariant& variant, const GridFunction& f, const GridGeometry& eval,
                     const BallFamily& balls) {
  if (eval.dim != f.dim()) throw std::invalid_argument("evaluation grid dimension differs from f");
  const auto op = maximal_evaluator(variant, f, balls);
  std::vector<double> out(eval.size());
  parallel_for(eval.ny, [&](std::size_t j) {
    const double y = eval.dim == 2 ? eval.center_y(j) : 0.0;
    for (std::size_t i = 0; i < eval.nx; ++i) out[j * eval.nx + i] = op(eval.center_x(i), y);
  });
  return GridFunction(eval, std::move(out));
}

GridFunction maximal(const MaximalVariant& variant, const GridFunction& f) {
  return maximal(variant, f, f.geometry().refined(2), BallFamily::standard(f.geometry()));
}

std::vector<double> maximal_at(const MaximalVariant& variant, const GridFunction& f,
                               const std::vector<std::array<double, 2>>& points, const BallFamily& balls) {
  const auto op = maximal_evaluator(variant, f, balls);
  std::vector<double> out(points.size());
  parallel_for(points.size(), [&](std::size_t i) { out[i] = op(points[i][0], points[i][1]); });
  return out;
}

// ---------------------------------------------------------------------------------------------
// Fractional integrals

namespace {

// Weight of one source cell for a target point at the origin: ∫_cell ρ(|z|)/|z|^n dz, the
// cell given in coordinates relative to the target.
class CellWeights {
 public:
  CellWeights(const Kernel& k, int dim, double h, double near_radius, const FracIntegralOptions& opts)
      : k_(k), dim_(dim), h_(h), near_(near_radius), opts_(opts) {}

  [[nodiscard]] double weight(double ax, double ay) const {
    if (dim_ == 1) return weight_1d(ax, ax + h_);
    return weight_2d(ax, ax + h_, ay, ay + h_);
  }

 private:
  [[nodiscard]] double weight_1d(double a, double b) const {
    const double dist = a >= 0.0 ? a : (b <= 0.0 ? -b : 0.0);
    if (dist <= near_) {
      if (a >= 0.0) return k_.rho_star(b) - (a > 0.0 ? k_.rho_star(a) : 0.0);
      if (b <= 0.0) return k_.rho_star(-a) - (b < 0.0 ? k_.rho_star(-b) : 0.0);
      return k_.rho_star(-a) + k_.rho_star(b);
    }
    auto midpoint = [&](int m) {
      const double step = (b - a) / m;
      CompensatedSum s;
      for (int i = 0; i < m; ++i) {
        const double t = std::abs(a + (i + 0.5) * step);
        s.add(k_(t) / t * step);
      }
      return s.value();
    };
    int m = 4;
    double prev = midpoint(m);
    for (int it = 0; it < opts_.max_refinements; ++it) {
      m *= 4;
      const double cur = midpoint(m);
      if (std::abs(cur - prev) <= opts_.tol * std::abs(cur)) return cur;
      prev = cur;
    }
    return prev;
  }

  [[nodiscard]] double weight_2d(double ax, double bx, double ay, double by) const {
    const double dx = ax > 0.0 ? ax : (bx < 0.0 ? -bx : 0.0);
    const double dy = ay > 0.0 ? ay : (by < 0.0 ? -by : 0.0);
    if (std::hypot(dx, dy) <= near_) return polar_2d(ax, bx, ay, by);
    auto midpoint = [&](int m) {
      const double sx = (bx - ax) / m;
      const double sy = (by - ay) / m;
      CompensatedSum s;
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
          const double t = std::hypot(ax + (i + 0.5) * sx, ay + (j + 0.5) * sy);
          s.add(k_(t) / (t * t) * sx * sy);
        }
      return s.value();
    };
    int m = 2;
    double prev = midpoint(m);
    for (int it = 0; it < opts_.max_refinements; ++it) {
      m *= 2;
      const double cur = midpoint(m);
      if (std::abs(cur - prev) <= opts_.tol * std::abs(cur)) return cur;
      prev = cur;
    }
    return prev;
  }

  // ∫ dθ [ρ*(R_out(θ)) - ρ*(R_in(θ))] over the directions that hit the rectangle.
  [[nodiscard]] double polar_2d(double ax, double bx, double ay, double by) const {
    const bool inside = ax <= 0.0 && bx >= 0.0 && ay <= 0.0 && by >= 0.0;
    auto radial = [&](double theta) {
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      double t_in = 0.0;
      double t_out = std::numeric_limits<double>::infinity();
      auto slab = [&](double d, double lo, double hi) {
        if (d == 0.0) {
          if (lo > 0.0 || hi < 0.0) t_out = -1.0;
          return;
        }
        double e = lo / d;
        double x = hi / d;
        if (e > x) std::swap(e, x);
        t_in = std::max(t_in, e);
        t_out = std::min(t_out, x);
      };
      slab(c, ax, bx);
      slab(s, ay, by);
      if (!(t_out > t_in)) return 0.0;
      return k_.rho_star(t_out) - (t_in > 0.0 ? k_.rho_star(t_in) : 0.0);
    };
    const std::array<std::array<double, 2>, 4> corners{{{ax, ay}, {bx, ay}, {bx, by}, {ax, by}}};
    std::vector<double> cuts;
    if (inside) {
      for (const auto& p : corners) {
        if (p[0] == 0.0 && p[1] == 0.0) continue;
        double a = std::atan2(p[1], p[0]);
        if (a < 0.0) a += 2.0 * std::numbers::pi;
        cuts.push_back(a);
      }
      cuts.push_back(0.0);
      cuts.push_back(2.0 * std::numbers::pi);
    } else {
      const double ref = std::atan2((ay + by) / 2.0, (ax + bx) / 2.0);
      for (const auto& p : corners) {
        double a = std::atan2(p[1], p[0]) - ref;
        while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
        while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
        cuts.push_back(ref + a);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    CompensatedSum total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      if (cuts[i + 1] > cuts[i]) total.add(integrate(radial, cuts[i], cuts[i + 1], 1e-11));
    return total.value();
  }

  Kernel k_;
  int dim_;
  double h_;
  double near_;
  FracIntegralOptions opts_;
};

void require_integrable(const Kernel& k) {
  if (!k.integrable_at_zero() || !std::isfinite(k.rho_star(1.0)))
    throw std::domain_error("kernel not integrable at 0");
}

// Integer ratio of source to evaluation spacing and the evaluation origin offset in evaluation
// cells, when the evaluation grid is an aligned refinement of the source grid.
bool aligned(const GridGeometry& src, const GridGeometry& ev, long long& ratio, long long& ox, long long& oy) {
  if (src.dim != ev.dim) return false;
  const double q = src.h / ev.h;
  const double rq = std::round(q);
  if (rq < 1.0 || std::abs(q - rq) > 1e-12 * q) return false;
  const double fx = (ev.x0 - src.x0) / ev.h;
  const double fy = src.dim == 2 ? (ev.y0 - src.y0) / ev.h : 0.0;
  if (std::abs(fx - std::round(fx)) > 1e-9 || std::abs(fy - std::round(fy)) > 1e-9) return false;
  ratio = static_cast<long long>(rq);
  ox = static_cast<long long>(std::round(fx));
  oy = static_cast<long long>(std::round(fy));
  return true;
}

}  // namespace

GridFunction frac_integral(const Kernel& k, const GridFunction& f, const GridGeometry& eval,
                           const FracIntegralOptions& opts) {
  require_integrable(k);
  const auto& g = f.geometry();
  if (eval.dim != g.dim) throw std::invalid_argument("evaluation grid dimension differs from f");
  long long R = 0, ox = 0, oy = 0;
  if (!aligned(g, eval, R, ox, oy)) {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(eval.size());
    for (std::size_t j = 0; j < eval.ny; ++j)
      for (std::size_t i = 0; i < eval.nx; ++i) pts.push_back({eval.center_x(i), eval.dim == 2 ? eval.center_y(j) : 0.0});
    return GridFunction(eval, frac_integral_at(k, f, pts, opts));
  }

  // Support box of f in source cells.
  long long i_lo = static_cast<long long>(g.nx), i_hi = -1, j_lo = static_cast<long long>(g.ny), j_hi = -1;
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i)
      if (f.value(i, j) != 0.0) {
        i_lo = std::min(i_lo, static_cast<long long>(i));
        i_hi = std::max(i_hi, static_cast<long long>(i));
        j_lo = std::min(j_lo, static_cast<long long>(j));
        j_hi = std::max(j_hi, static_cast<long long>(j));
      }
  std::vector<double> out(eval.size(), 0.0);
  if (i_hi < 0) return GridFunction(eval, std::move(out));

  // Offset q = (eval index + origin offset) - R * (source index); the target sits at
  // (q + 1/2) h_e from the source cell's lower corner.
  const CellWeights cw(k, g.dim, g.h, opts.near_fraction * extent(g), opts);
  const long long qx_lo = ox - R * i_hi;
  const long long qx_hi = ox + static_cast<long long>(eval.nx) - 1 - R * i_lo;
  const long long qy_lo = g.dim == 2 ? oy - R * j_hi : 0;
  const long long qy_hi = g.dim == 2 ? oy + static_cast<long long>(eval.ny) - 1 - R * j_lo : 0;
  const auto wx = static_cast<std::size_t>(qx_hi - qx_lo + 1);
  const auto wy = static_cast<std::size_t>(qy_hi - qy_lo + 1);
  std::vector<double> W(wx * wy);
  parallel_for(wy, [&](std::size_t b) {
    const double ay = -(static_cast<double>(qy_lo + static_cast<long long>(b)) + 0.5) * eval.h;
    for (std::size_t a = 0; a < wx; ++a) {
      const double ax = -(static_cast<double>(qx_lo + static_cast<long long>(a)) + 0.5) * eval.h;
      W[b * wx + a] = cw.weight(ax, ay);
    }
  });

  parallel_for(eval.ny, [&](std::size_t je) {
    for (std::size_t ie = 0; ie < eval.nx; ++ie) {
      CompensatedSum s;
      for (long long j = j_lo; j <= j_hi; ++j) {
        const long long qy = g.dim == 2 ? oy + static_cast<long long>(je) - R * j - qy_lo : 0;
        const double* wrow = &W[static_cast<std::size_t>(qy) * wx];
        for (long long i = i_lo; i <= i_hi; ++i) {
          const double v = f.value(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
          if (v == 0.0) continue;
          s.add(v * wrow[ox + static_cast<long long>(ie) - R * i - qx_lo]);
        }
      }
      out[je * eval.nx + ie] = s.value();
    }
  });
  return GridFunction(eval, std::move(out));
}

GridFunction frac_integral(const Kernel& k, const GridFunction& f, const FracIntegralOptions& opts) {
  return frac_integral(k, f, f.geometry().refined(2), opts);
}

std::vector<double> frac_integral_at(const Kernel& k, const GridFunction& f,
                                     const std::vector<std::array<double, 2>>& points,
                                     const FracIntegralOptions& opts) {
  require_integrable(k);
  const auto& g = f.geometry();
  const CellWeights cw(k, g.dim, g.h, opts.near_fraction * extent(g), opts);
  std::vector<double> out(points.size(), 0.0);
  parallel_for(points.size(), [&](std::size_t p) {
    const double x = points[p][0];
    const double y = points[p][1];
    CompensatedSum s;
    for (std::size_t j = 0; j < g.ny; ++j)
      for (std::size_t i = 0; i < g.nx; ++i) {
        const double v = f.value(i, j);
        if (v == 0.0) continue;
        const double ax = g.x0 + static_cast<double>(i) * g.h - x;
        const double ay = g.dim == 2 ? g.y0 + static_cast<double>(j) * g.h - y : 0.0;
        s.add(v * cw.weight(ax, ay));
      }
    out[p] = s.value();
  });
  return out;
}

GridFunction commutator(const GridFunction& b, const Kernel& k, const GridFunction& f, const GridGeometry& eval,
                        const FracIntegralOptions& opts) {
  const GridFunction bf = f.times(b.resampled(f.geometry()));
  const GridFunction i_f = frac_integral(k, f, eval, opts);
  const GridFunction i_bf = frac_integral(k, bf, eval, opts);
  std::vector<double> out(eval.size());
  for (std::size_t j = 0; j < eval.ny; ++j)
    for (std::size_t i = 0; i < eval.nx; ++i) {
      const double y = eval.dim == 2 ? eval.center_y(j) : 0.0;
      const std::size_t idx = j * eval.nx + i;
      out[idx] = b.value_at(eval.center_x(i), y) * i_f.values()[idx] - i_bf.values()[idx];
    }
  return GridFunction(eval, std::move(out));
}

GridFunction commutator(const GridFunction& b, const Kernel& k, const GridFunction& f,
                        const FracIntegralOptions& opts) {
  return commutator(b, k, f, f.geometry().refined(2), opts);
}

}  // namespace orlicz
