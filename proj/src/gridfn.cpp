#include "orlicz/gridfn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "orlicz/numeric.hpp"
#include "orlicz/parse.hpp"

namespace orlicz {

GridGeometry GridGeometry::line(double h, double x0, std::size_t nx) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("grid: h must be > 0");
  if (nx == 0) throw std::invalid_argument("grid: need at least one cell");
  GridGeometry g;
  g.dim = 1;
  g.h = h;
  g.x0 = x0;
  g.nx = nx;
  g.ny = 1;
  return g;
}

GridGeometry GridGeometry::plane(double h, double x0, double y0, std::size_t nx, std::size_t ny) {
  GridGeometry g = line(h, x0, nx);
  if (ny == 0) throw std::invalid_argument("grid: need at least one row");
  g.dim = 2;
  g.y0 = y0;
  g.ny = ny;
  return g;
}

GridGeometry GridGeometry::refined(std::size_t factor) const {
  if (factor == 0) throw std::invalid_argument("grid: refinement factor must be positive");
  GridGeometry g = *this;
  g.h = h / static_cast<double>(factor);
  g.nx = nx * factor;
  if (dim == 2) g.ny = ny * factor;
  return g;
}

GridFunction::GridFunction(GridGeometry geometry, std::vector<double> values)
    : geom_(geometry), values_(std::move(values)) {
  if (geom_.dim != 1 && geom_.dim != 2) throw std::invalid_argument("grid: dimension must be 1 or 2");
  if (geom_.dim == 1 && geom_.ny != 1) throw std::invalid_argument("grid: 1D grids have one row");
  if (values_.size() != geom_.size()) throw std::invalid_argument("grid: value count does not match geometry");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("grid: values must be finite");
  }
}

GridFunction GridFunction::sample(const GridGeometry& g, const std::function<double(double, double)>& fn) {
  std::vector<double> v(g.size());
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      v[j * g.nx + i] = fn(g.center_x(i), g.dim == 2 ? g.center_y(j) : 0.0);
    }
  }
  return GridFunction(g, std::move(v));
}

double GridFunction::value_at(double x, double y) const {
  const double fx = std::floor((x - geom_.x0) / geom_.h);
  if (fx < 0.0 || fx >= static_cast<double>(geom_.nx)) return 0.0;
  std::size_t j = 0;
  if (geom_.dim == 2) {
    const double fy = std::floor((y - geom_.y0) / geom_.h);
    if (fy < 0.0 || fy >= static_cast<double>(geom_.ny)) return 0.0;
    j = static_cast<std::size_t>(fy);
  }
  return values_[j * geom_.nx + static_cast<std::size_t>(fx)];
}

double GridFunction::integral() const {
  CompensatedSum s;
  for (double v : values_) s.add(v);
  return s.value() * geom_.cell_measure();
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool GridFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

GridFunction GridFunction::map(const std::function<double(double)>& fn) const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), fn);
  return GridFunction(geom_, std::move(v));
}

GridFunction GridFunction::scaled(double c) const {
  return map([c](double v) { return c * v; });
}

GridFunction GridFunction::abs() const {
  return map([](double v) { return std::abs(v); });
}

GridFunction GridFunction::times(const GridFunction& other) const {
  if (!(geom_ == other.geom_)) throw std::invalid_argument("grid: geometries differ");
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] * other.values_[i];
  return GridFunction(geom_, std::move(v));
}

GridFunction GridFunction::plus(const GridFunction& other) const {
  if (!(geom_ == other.geom_)) throw std::invalid_argument("grid: geometries differ");
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] + other.values_[i];
  return GridFunction(geom_, std::move(v));
}

GridFunction GridFunction::resampled(const GridGeometry& target) const {
  if (target.dim != geom_.dim) throw std::invalid_argument("grid: dimensions differ");
  return sample(target, [this](double x, double y) { return value_at(x, y); });
}

namespace {

struct Level {
  double value;
  double measure;
};

// Distinct positive |f| values in increasing order with the measure of each level set.
std::vector<Level> levels(const GridFunction& f) {
  std::map<double, std::size_t> counts;
  for (double v : f.values()) {
    if (v != 0.0) ++counts[std::abs(v)];
  }
  std::vector<Level> out;
  out.reserve(counts.size());
  const double cell = f.geometry().cell_measure();
  for (const auto& [v, c] : counts) out.push_back({v, static_cast<double>(c) * cell});
  return out;
}

double modular_from_levels(const std::vector<Level>& lv, const YoungFunction& phi, double lambda) {
  CompensatedSum s;
  for (const auto& l : lv) {
    const double v = phi(l.value / lambda);
    if (std::isinf(v)) return kInf;
    s.add(v * l.measure);
  }
  return s.value();
}

double weak_from_levels(const std::vector<Level>& lv, const YoungFunction& phi, double lambda) {
  // On t ∈ [v_{j-1}/λ, v_j/λ) the level set {|f|/λ > t} is {|f| ≥ v_j}; Φ is
  // left-continuous, so its sup over that interval is Φ(v_j/λ).
  double best = 0.0;
  double tail = 0.0;
  for (auto it = lv.rbegin(); it != lv.rend(); ++it) {
    tail += it->measure;
    const double v = phi(it->value / lambda);
    if (std::isinf(v)) return kInf;
    best = std::max(best, v * tail);
  }
  return best;
}

template <class Modular>
double bisect_norm(const Modular& modular, double start) {
  double lo = start;
  double hi = start;
  if (modular(start) <= 1.0) {
    lo = 0.5 * start;
    while (modular(lo) <= 1.0) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300) return 0.0;
    }
  } else {
    hi = 2.0 * start;
    while (!(modular(hi) <= 1.0)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) return kInf;
    }
  }
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (modular(mid) <= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

double orlicz_modular(const GridFunction& f, const YoungFunction& phi, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("modular: lambda must be > 0");
  return modular_from_levels(levels(f), phi, lambda);
}

double weak_modular(const GridFunction& f, const YoungFunction& phi, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("modular: lambda must be > 0");
  return weak_from_levels(levels(f), phi, lambda);
}

double luxemburg_norm(const GridFunction& f, const YoungFunction& phi) {
  const auto lv = levels(f);
  if (lv.empty()) return 0.0;
  return bisect_norm([&](double l) { return modular_from_levels(lv, phi, l); }, lv.back().value);
}

double weak_luxemburg_norm(const GridFunction& f, const YoungFunction& phi) {
  const auto lv = levels(f);
  if (lv.empty()) return 0.0;
  return bisect_norm([&](double l) { return weak_from_levels(lv, phi, l); }, lv.back().value);
}

double distribution_function(const GridFunction& f, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("distribution_function: t must be > 0");
  std::size_t count = 0;
  for (double v : f.values()) {
    if (std::abs(v) > t) ++count;
  }
  return static_cast<double>(count) * f.geometry().cell_measure();
}

double exact_char_norm(double measure, const YoungFunction& phi) {
  if (!(measure > 0.0)) throw std::invalid_argument("exact_char_norm: measure must be > 0");
  const double inv = phi.inverse(1.0 / measure);
  return inv == 0.0 ? kInf : 1.0 / inv;
}

void write_grid(std::ostream& out, const GridFunction& f) {
  const auto& g = f.geometry();
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  if (g.dim == 1) {
    out << "1 " << num(g.h) << ' ' << num(g.x0) << '\n';
  } else {
    out << "2 " << num(g.h) << ' ' << num(g.x0) << ' ' << num(g.y0) << ' ' << g.ny << ' ' << g.nx << '\n';
  }
  for (double v : f.values()) out << num(v) << '\n';
}

void write_grid(const std::string& path, const GridFunction& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_grid(out, f);
}

GridFunction read_grid(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("<empty>", "grid file has no header");
  std::stringstream hs(line);
  std::vector<std::string> tok;
  for (std::string t; hs >> t;) tok.push_back(t);
  if (tok.empty() || (tok[0] != "1" && tok[0] != "2")) throw ParseError(tok.empty() ? line : tok[0], "bad grid dimension");
  const int dim = tok[0] == "1" ? 1 : 2;
  if ((dim == 1 && tok.size() != 3) || (dim == 2 && tok.size() != 6)) throw ParseError(line, "bad grid header");
  std::vector<double> values;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::string t;
    if (!(ls >> t)) continue;
    values.push_back(parse_number(t));
  }
  const double h = parse_number(tok[1]);
  const double x0 = parse_number(tok[2]);
  if (!(h > 0.0)) throw ParseError(tok[1], "cell width must be positive");
  if (dim == 1) {
    if (values.empty()) throw ParseError(line, "grid file has no values");
    const auto g = GridGeometry::line(h, x0, values.size());
    return GridFunction(g, std::move(values));
  }
  const double y0 = parse_number(tok[3]);
  const double rows = parse_number(tok[4]);
  const double cols = parse_number(tok[5]);
  if (!(rows >= 1 && cols >= 1) || rows != std::floor(rows) || cols != std::floor(cols)) {
    throw ParseError(tok[4] + " " + tok[5], "bad rows/cols");
  }
  const auto g = GridGeometry::plane(h, x0, y0, static_cast<std::size_t>(cols), static_cast<std::size_t>(rows));
  if (values.size() != g.size()) throw ParseError(std::to_string(values.size()), "value count does not match rows*cols");
  return GridFunction(g, std::move(values));
}

GridFunction read_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  return read_grid(in);
}

void write_csv(std::ostream& out, const GridFunction& f) {
  const auto& g = f.geometry();
  char buf[128];
  out << (g.dim == 1 ? "x,f\n" : "x,y,f\n");
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      if (g.dim == 1) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", g.center_x(i), f.value(i));
      } else {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.center_x(i), g.center_y(j), f.value(i, j));
      }
      out << buf;
    }
  }
}

GridFunction make_builtin(const std::string& text, const GridGeometry& g) {
  const DescriptorText d = split_descriptor(text);
  const bool two = g.dim == 2;
  auto radius = [two](double x, double y) { return two ? std::hypot(x, y) : std::abs(x); };
  if (d.family == "chi") {
    require_keys(d, {"a", "b"});
    const double a = param(d, "a");
    const double b = param(d, "b");
    if (!(a < b)) throw ParseError(text, "chi needs a < b");
    return GridFunction::sample(g, [=](double x, double y) {
      const bool in = x >= a && x < b && (!two || (y >= a && y < b));
      return in ? 1.0 : 0.0;
    });
  }
  if (d.family == "log-abs") {
    require_keys(d, {});
    return GridFunction::sample(g, [=](double x, double y) {
      const double r = radius(x, y);
      return r > 0.0 ? std::log(r) : 0.0;
    });
  }
  if (d.family == "sign") {
    require_keys(d, {});
    return GridFunction::sample(g, [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
  }
  if (d.family == "abs-pow") {
    require_keys(d, {"beta"});
    const double beta = param(d, "beta");
    return GridFunction::sample(g, [=](double x, double y) { return std::pow(radius(x, y), beta); });
  }
  if (d.family == "const") {
    require_keys(d, {"c"});
    const double c = param(d, "c");
    return GridFunction::sample(g, [=](double, double) { return c; });
  }
  throw ParseError(d.family, "unknown builtin function");
}

}  // namespace orlicz
