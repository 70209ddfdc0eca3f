#include "orlicz/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "orlicz/numeric.hpp"
#include "orlicz/parse.hpp"

namespace orlicz {

namespace {

constexpr double kE = 2.718281828459045;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

template <class F>
double bisect_monotone(const F& f, double u) {
  double lo = 0.0;
  double hi = 1.0;
  if (f(hi) > u) {
    lo = 0.5;
    while (f(lo) > u) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300) return 0.0;
    }
  } else {
    lo = 1.0;
    hi = 2.0;
    while (!(f(hi) > u)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) return kInf;
    }
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (f(mid) > u) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

}  // namespace

YoungFunction YoungFunction::power(double p) {
  require(p >= 1.0 && std::isfinite(p), "power: p must be >= 1");
  YoungFunction y;
  y.family_ = YoungFamily::Power;
  y.p_ = p;
  return y;
}

YoungFunction YoungFunction::power_log(double p, double p1) {
  require(p >= 1.0 && std::isfinite(p), "powerlog: p must be >= 1");
  require(p1 >= 0.0 && std::isfinite(p1), "powerlog: p1 must be >= 0");
  YoungFunction y;
  y.family_ = YoungFamily::PowerLog;
  y.p_ = p;
  y.q_ = p1;
  return y;
}

YoungFunction YoungFunction::exp_power(double p) {
  require(p > 0.0 && std::isfinite(p), "exppower: p must be > 0");
  YoungFunction y;
  y.family_ = YoungFamily::ExpPower;
  y.p_ = p;
  return y;
}

YoungFunction YoungFunction::power_minus_one(double p) {
  require(p >= 1.0 && std::isfinite(p), "powerminus1: p must be >= 1");
  YoungFunction y;
  y.family_ = YoungFamily::PowerMinusOne;
  y.p_ = p;
  return y;
}

YoungFunction YoungFunction::max_power(double p, double q) {
  require(p >= 1.0 && q >= 1.0 && std::isfinite(p) && std::isfinite(q),
          "maxpower: p and q must be >= 1");
  YoungFunction y;
  y.family_ = YoungFamily::MaxPower;
  y.p_ = std::min(p, q);
  y.q_ = std::max(p, q);
  return y;
}

YoungFunction YoungFunction::step_infinity(double c) {
  require(c > 0.0 && std::isfinite(c), "stepinf: c must be > 0");
  YoungFunction y;
  y.family_ = YoungFamily::StepInfinity;
  y.p_ = c;
  return y;
}

YoungFunction YoungFunction::max_quad_linear(double a, double c) {
  require(a > 0.0 && c >= 0.0 && std::isfinite(a) && std::isfinite(c),
          "maxquadlin: need a > 0 and c >= 0");
  YoungFunction y;
  y.family_ = YoungFamily::MaxQuadLinear;
  y.p_ = a;
  y.q_ = c;
  return y;
}

YoungFunction YoungFunction::tabulated(std::vector<double> t, std::vector<double> value,
                                       double b_limit) {
  require(!t.empty() && t.size() == value.size(), "table: need matching nonempty columns");
  for (std::size_t i = 0; i < t.size(); ++i) {
    require(t[i] > 0.0 && std::isfinite(t[i]), "table: t must be positive");
    require(value[i] >= 0.0 && std::isfinite(value[i]), "table: values must be finite and >= 0");
    if (i > 0) {
      require(t[i] > t[i - 1], "table: t must be strictly increasing");
      require(value[i] >= value[i - 1], "table: values must be nondecreasing");
    }
  }
  require(b_limit >= t.back(), "table: b limit below last breakpoint");
  YoungFunction y;
  y.family_ = YoungFamily::Tabulated;
  y.tab_t_ = std::move(t);
  y.tab_v_ = std::move(value);
  y.tab_b_ = b_limit;
  return y;
}

YoungFunction YoungFunction::parse(const std::string& text) {
  const DescriptorText d = split_descriptor(text);
  YoungFunction y;
  if (d.family == "power") {
    require_keys(d, {"p", "q", "scale"});
    if (d.params.count("p") && d.params.count("q")) throw ParseError(text, "power takes p or q, not both");
    const double p = d.params.count("q") ? param(d, "q") : param(d, "p");
    y = power(p);
  } else if (d.family == "powerlog") {
    require_keys(d, {"p", "p1", "scale"});
    y = power_log(param(d, "p"), param(d, "p1"));
  } else if (d.family == "exppower") {
    require_keys(d, {"p", "scale"});
    y = exp_power(param(d, "p"));
  } else if (d.family == "powerminus1") {
    require_keys(d, {"p", "scale"});
    y = power_minus_one(param(d, "p"));
  } else if (d.family == "maxpower") {
    require_keys(d, {"p", "q", "scale"});
    y = max_power(param(d, "p"), param(d, "q"));
  } else if (d.family == "stepinf") {
    require_keys(d, {"c", "scale"});
    y = step_infinity(param_or(d, "c", 1.0));
  } else if (d.family == "maxquadlin") {
    require_keys(d, {"a", "c", "scale"});
    y = max_quad_linear(param(d, "a"), param(d, "c"));
  } else if (d.family == "table") {
    std::vector<double> t;
    std::vector<double> v;
    for (const auto& [a, b] : read_pairs(d.path)) {
      t.push_back(a);
      v.push_back(b);
    }
    try {
      return tabulated(std::move(t), std::move(v));
    } catch (const std::invalid_argument& e) {
      throw ParseError(d.path, e.what());
    }
  } else {
    throw ParseError(d.family, "unknown Young family");
  }
  const double s = param_or(d, "scale", 1.0);
  if (!(s > 0.0) || !std::isfinite(s)) throw ParseError(text, "scale must be > 0");
  return y.scaled(s);
}

YoungFunction YoungFunction::scaled(double factor) const {
  require(factor > 0.0 && std::isfinite(factor), "scale must be > 0");
  YoungFunction y = *this;
  y.scale_ *= factor;
  return y;
}

YoungFunction YoungFunction::composed(double theta) const {
  require(theta > 0.0 && std::isfinite(theta), "theta must be > 0");
  YoungFunction y = *this;
  y.theta_ *= theta;
  return y;
}

double YoungFunction::tab_eval(double s) const {
  if (s > tab_b_) return kInf;
  if (s <= 0.0) return 0.0;
  const auto& t = tab_t_;
  const auto& v = tab_v_;
  const std::size_t n = t.size();
  auto loglog = [](double t0, double v0, double t1, double v1, double x) {
    const double k = std::log(v1 / v0) / std::log(t1 / t0);
    return v0 * std::pow(x / t0, k);
  };
  auto linear = [](double t0, double v0, double t1, double v1, double x) {
    return v0 + (v1 - v0) * (x - t0) / (t1 - t0);
  };
  if (s <= t[0]) {
    if (s == t[0]) return v[0];
    if (v[0] == 0.0) return 0.0;
    if (n >= 2 && v[1] > v[0]) return loglog(t[0], v[0], t[1], v[1], s);
    return v[0] * s / t[0];
  }
  if (s >= t[n - 1]) {
    if (s == t[n - 1] || n == 1) return v[n - 1] * (n == 1 ? s / t[0] : 1.0);
    const double t0 = t[n - 2];
    const double v0 = v[n - 2];
    if (v0 > 0.0) return loglog(t0, v0, t[n - 1], v[n - 1], s);
    return linear(t0, v0, t[n - 1], v[n - 1], s);
  }
  const std::size_t i = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), s) - t.begin()) - 1;
  if (s == t[i]) return v[i];
  if (v[i] > 0.0) return loglog(t[i], v[i], t[i + 1], v[i + 1], s);
  return linear(t[i], v[i], t[i + 1], v[i + 1], s);
}

double YoungFunction::base(double s) const {
  if (s == 0.0) return 0.0;
  if (std::isinf(s)) return kInf;
  switch (family_) {
    case YoungFamily::Power:
      return std::pow(s, p_);
    case YoungFamily::PowerLog:
      if (s <= 1.0 / kE) return std::pow(s, p_) * std::pow(std::log(1.0 / s), -q_);
      if (s >= kE) return std::pow(s, p_) * std::pow(std::log(s), q_);
      return std::pow(s, p_);
    case YoungFamily::ExpPower:
      if (s <= 1.0 / kE) return std::exp(-std::pow(s, -p_));
      if (s >= kE) return std::exp(std::pow(s, p_));
      return std::pow(s, std::exp(p_));
    case YoungFamily::PowerMinusOne:
      return s <= 1.0 ? 0.0 : std::expm1(p_ * std::log1p(s - 1.0));
    case YoungFamily::MaxPower:
      return s < 1.0 ? std::pow(s, p_) : std::pow(s, q_);
    case YoungFamily::StepInfinity:
      return s <= p_ ? 0.0 : kInf;
    case YoungFamily::MaxQuadLinear:
      return std::max(s * s, p_ * s - q_);
    case YoungFamily::Tabulated:
      return tab_eval(s);
  }
  return kInf;
}

double YoungFunction::operator()(double t) const {
  if (!(t >= 0.0)) throw std::domain_error("Young function evaluated at a negative or NaN point");
  if (std::isinf(t)) return kInf;
  const double s = theta_ == 1.0 ? t : std::pow(t, theta_);
  const double b = base(s);
  if (b == 0.0) return 0.0;
  return scale_ * b;
}

Extended YoungFunction::eval(Extended t) const { return Extended((*this)(t.value())); }

bool YoungFunction::inverse_is_closed_form() const {
  return family_ != YoungFamily::PowerLog && family_ != YoungFamily::MaxQuadLinear &&
         family_ != YoungFamily::Tabulated;
}

double YoungFunction::base_inverse(double w) const {
  switch (family_) {
    case YoungFamily::Power:
      return std::pow(w, 1.0 / p_);
    case YoungFamily::PowerMinusOne: {
      double t = std::exp(std::log1p(w) / p_);
      while (t > 1.0 && base(t) > w) t = std::nextafter(t, 0.0);
      return t;
    }
    case YoungFamily::MaxPower:
      return w < 1.0 ? std::pow(w, 1.0 / p_) : std::pow(w, 1.0 / q_);
    case YoungFamily::StepInfinity:
      return p_;
    case YoungFamily::ExpPower: {
      if (w == 0.0) return 0.0;
      const double ep = std::exp(p_);
      if (w < std::exp(-ep)) return std::pow(-std::log(w), -1.0 / p_);
      if (w < std::exp(ep)) return std::pow(w, 1.0 / ep);
      return std::pow(std::log(w), 1.0 / p_);
    }
    case YoungFamily::PowerLog:
    case YoungFamily::MaxQuadLinear:
    case YoungFamily::Tabulated:
      return bisect_monotone([this](double s) { return base(s); }, w);
  }
  return kInf;
}

double YoungFunction::inverse(double u) const {
  if (!(u >= 0.0)) throw std::domain_error("generalized inverse at a negative or NaN point");
  if (std::isinf(u)) return kInf;
  const double s = base_inverse(u / scale_);
  if (theta_ == 1.0 || s == 0.0 || std::isinf(s)) return s;
  return std::pow(s, 1.0 / theta_);
}

Extended YoungFunction::inverse(Extended u) const { return Extended(inverse(u.value())); }

double YoungFunction::base_a() const {
  switch (family_) {
    case YoungFamily::PowerMinusOne:
      return 1.0;
    case YoungFamily::StepInfinity:
      return p_;
    case YoungFamily::Tabulated: {
      double a = 0.0;
      for (std::size_t i = 0; i < tab_t_.size() && tab_v_[i] == 0.0; ++i) a = tab_t_[i];
      return a;
    }
    default:
      return 0.0;
  }
}

double YoungFunction::base_b() const {
  if (family_ == YoungFamily::StepInfinity) return p_;
  if (family_ == YoungFamily::Tabulated) return tab_b_;
  return kInf;
}

double YoungFunction::a_phi() const {
  const double a = base_a();
  return (theta_ == 1.0 || a == 0.0) ? a : std::pow(a, 1.0 / theta_);
}

double YoungFunction::b_phi() const {
  const double b = base_b();
  return (theta_ == 1.0 || std::isinf(b)) ? b : std::pow(b, 1.0 / theta_);
}

bool YoungFunction::is_convex() const {
  const double b = b_phi();
  std::vector<double> ts{0.0};
  for (double t : dyadic_grid(-30, 30, 16)) {
    if (t >= b) break;
    ts.push_back(t);
  }
  if (b < kInf && b > 0.0) ts.push_back(b);
  std::vector<double> vs;
  for (double t : ts) {
    const double v = (*this)(t);
    if (!std::isfinite(v)) break;
    vs.push_back(v);
  }
  double prev_slope = -kInf;
  for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
    const double slope = (vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i]);
    if (slope < prev_slope - 1e-9 * std::abs(prev_slope) - 1e-300) return false;
    prev_slope = slope;
  }
  return true;
}

std::string YoungFunction::describe() const {
  std::string s;
  switch (family_) {
    case YoungFamily::Power:
      s = "power:p=" + format_number(p_);
      break;
    case YoungFamily::PowerLog:
      s = "powerlog:p=" + format_number(p_) + ",p1=" + format_number(q_);
      break;
    case YoungFamily::ExpPower:
      s = "exppower:p=" + format_number(p_);
      break;
    case YoungFamily::PowerMinusOne:
      s = "powerminus1:p=" + format_number(p_);
      break;
    case YoungFamily::MaxPower:
      s = "maxpower:p=" + format_number(p_) + ",q=" + format_number(q_);
      break;
    case YoungFamily::StepInfinity:
      s = "stepinf:c=" + format_number(p_);
      break;
    case YoungFamily::MaxQuadLinear:
      s = "maxquadlin:a=" + format_number(p_) + ",c=" + format_number(q_);
      break;
    case YoungFamily::Tabulated:
      s = "table[" + std::to_string(tab_t_.size()) + " points, b=" + format_number(tab_b_) + "]";
      break;
  }
  if (scale_ != 1.0) s += (s.find(':') == std::string::npos ? ":" : ",") + std::string("scale=") + format_number(scale_);
  if (theta_ != 1.0) s += " composed with t^" + format_number(theta_);
  return s;
}

double bisect_inverse(const YoungFunction& phi, double u) {
  if (!(u >= 0.0)) throw std::domain_error("generalized inverse at a negative or NaN point");
  if (std::isinf(u)) return kInf;
  return bisect_monotone(phi, u);
}

namespace {

// sup_u (t u - Φ(u)) for one t; Φ convex so the objective is concave.
double conjugate_at(const YoungFunction& phi, double t) {
  const double b = phi.b_phi();
  auto g = [&](double u) {
    if (u > b) return -kInf;
    const double v = phi(u);
    return std::isinf(v) ? -kInf : t * u - v;
  };
  double u0 = std::min(1.0, b);
  double lo = 0.0;
  double hi = 0.0;
  if (g(std::min(2.0 * u0, b)) >= g(u0) && 2.0 * u0 <= b) {
    while (2.0 * u0 <= b && g(2.0 * u0) >= g(u0)) {
      u0 *= 2.0;
      if (u0 > 1e300) return kInf;
    }
    lo = 0.5 * u0;
    hi = std::min(2.0 * u0, b);
  } else {
    while (u0 > 1e-300 && g(0.5 * u0) > g(u0)) u0 *= 0.5;
    lo = u0 > 1e-300 ? 0.5 * u0 : 0.0;
    hi = std::min(2.0 * u0, b);
  }
  const double r = 0.6180339887498949;
  double x1 = hi - r * (hi - lo);
  double x2 = lo + r * (hi - lo);
  double g1 = g(x1);
  double g2 = g(x2);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    if (g1 < g2) {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = lo + r * (hi - lo);
      g2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = hi - r * (hi - lo);
      g1 = g(x1);
    }
  }
  const double best = std::max({g1, g2, g(lo), g(hi), 0.0});
  return best;
}

}  // namespace

YoungFunction complementary(const YoungFunction& phi) {
  if (!phi.is_convex()) throw std::invalid_argument("complementary: input is not a Young function (not convex)");
  if (phi.family() == YoungFamily::Power) {
    const double P = phi.p() * phi.theta();
    const double a = phi.scale();
    if (P < 1.0) throw std::invalid_argument("complementary: input is not a Young function (not convex)");
    if (P == 1.0) return YoungFunction::step_infinity(a);
    const double Pc = P / (P - 1.0);
    return YoungFunction::power(Pc).scaled((P - 1.0) * a * std::pow(a * P, -Pc));
  }
  if (phi.family() == YoungFamily::StepInfinity) {
    return YoungFunction::power(1.0).scaled(phi.b_phi());
  }
  const std::vector<double> ts = log_grid(std::exp2(-30.0), std::exp2(30.0), 512);
  std::vector<double> t_out;
  std::vector<double> v_out;
  double b_limit = kInf;
  double running = 0.0;
  for (double t : ts) {
    const double v = conjugate_at(phi, t);
    if (std::isinf(v)) {
      if (t_out.empty()) {
        b_limit = ts.front();
        break;
      }
      double lo = t_out.back();
      double hi = t;
      for (int i = 0; i < 80 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::isinf(conjugate_at(phi, mid)) ? hi : lo) = mid;
      }
      if (lo > t_out.back()) {
        running = std::max(running, conjugate_at(phi, lo));
        t_out.push_back(lo);
        v_out.push_back(running);
      }
      b_limit = lo;
      break;
    }
    running = std::max(running, v);
    t_out.push_back(t);
    v_out.push_back(running);
  }
  if (t_out.empty()) return YoungFunction::step_infinity(ts.front());
  return YoungFunction::tabulated(std::move(t_out), std::move(v_out), b_limit);
}

std::vector<double> default_t_grid() { return dyadic_grid(-30, 30, 4); }

CheckReport check_delta2(const YoungFunction& phi, const std::vector<double>& t_grid) {
  CheckReport rep;
  rep.name = "delta2";
  double worst = 0.0;
  double witness = t_grid.empty() ? 0.0 : t_grid.front();
  for (double t : t_grid) {
    const double a = phi(t);
    const double b = phi(2.0 * t);
    if (a == 0.0 && b == 0.0) continue;
    double ratio = 0.0;
    if (a == 0.0 || std::isinf(b)) {
      ratio = kInf;
    } else {
      ratio = b / a;
    }
    if (ratio > worst || (std::isinf(ratio) && std::isinf(worst))) {
      worst = ratio;
      witness = t;
    }
  }
  rep.constant = Extended(worst);
  rep.witnesses = {witness};
  rep.pass = std::isfinite(worst);
  rep.detail = "sup Phi(2t)/Phi(t) = " + format_number(worst) + " at t = " + format_number(witness);
  return rep;
}

std::vector<double> default_k_candidates() { return {1.25, 1.5, 2, 3, 4, 6, 8, 12, 16, 32, 64}; }

namespace {

// Largest violation factor 2kΦ(t)/Φ(kt) over the grid and where it occurs.
std::pair<double, double> nabla2_excess(const YoungFunction& phi, const std::vector<double>& t_grid, double k) {
  double worst = 0.0;
  double witness = t_grid.empty() ? 0.0 : t_grid.front();
  for (double t : t_grid) {
    const double lhs = 2.0 * k * phi(t);
    const double rhs = phi(k * t);
    if (lhs == 0.0) continue;
    double r = 0.0;
    if (std::isinf(rhs)) {
      r = 0.0;
    } else if (std::isinf(lhs) || rhs == 0.0) {
      r = kInf;
    } else {
      r = lhs / rhs;
    }
    if (r > worst) {
      worst = r;
      witness = t;
    }
  }
  return {worst, witness};
}

}  // namespace

CheckReport check_nabla2(const YoungFunction& phi, const std::vector<double>& t_grid,
                         const std::vector<double>& k_candidates) {
  std::vector<double> ks = k_candidates;
  for (double k : ks) {
    if (!(k > 1.0)) throw std::invalid_argument("check_nabla2: candidates must exceed 1");
  }
  std::sort(ks.begin(), ks.end());
  CheckReport rep;
  rep.name = "nabla2";
  rep.constant = Extended::infinity();
  for (double k : ks) {
    const auto [excess, witness] = nabla2_excess(phi, t_grid, k);
    rep.witnesses = {witness};
    if (excess <= 1.0 + 1e-12) {
      rep.pass = true;
      rep.constant = Extended(k);
      rep.detail = "k = " + format_number(k) + ", tightest at t = " + format_number(witness);
      return rep;
    }
    rep.detail = "no candidate passes; k = " + format_number(k) + " violated at t = " + format_number(witness);
  }
  return rep;
}

PowerComposition power_compose_nabla2(const YoungFunction& phi, std::optional<double> forced_theta) {
  const auto grid = default_t_grid();
  const CheckReport base = check_nabla2(phi, grid, default_k_candidates());
  if (!base.pass) throw std::invalid_argument("power_compose_nabla2: input fails the nabla2 check");
  PowerComposition out;
  out.k = base.constant.value();
  out.theta = forced_theta ? *forced_theta : 1.0 / (1.0 + std::log(2.0) / (2.0 * std::log(out.k)));
  if (!(out.theta > 0.0 && out.theta <= 1.0)) throw std::invalid_argument("power_compose_nabla2: theta must lie in (0, 1]");
  out.composed = out.theta == 1.0 ? phi : phi.composed(out.theta);
  std::vector<double> ks = default_k_candidates();
  ks.push_back(std::pow(out.k, 2.0 / out.theta));
  out.composed_nabla2 = check_nabla2(out.composed, grid, ks);
  return out;
}

namespace {

double derivative(const YoungFunction& phi, double t) {
  const double h = t * 1e-5;
  bool one_sided = false;
  if (phi.family() == YoungFamily::Tabulated) {
    const double s = phi.theta() == 1.0 ? t : std::pow(t, phi.theta());
    const double hs = s * 1e-5 * std::max(1.0, phi.theta());
    for (double k : phi.table_t()) {
      if (std::abs(k - s) <= 2.0 * hs) {
        one_sided = true;
        break;
      }
    }
  }
  if (one_sided) return (phi(t + h) - phi(t)) / h;
  return (phi(t + h) - phi(t - h)) / (2.0 * h);
}

}  // namespace

CheckReport check_derivative_doubling(const YoungFunction& phi, const std::vector<double>& t_grid) {
  if (!check_delta2(phi, t_grid).pass) {
    throw std::invalid_argument("check_derivative_doubling: input is not delta2-certified");
  }
  CheckReport rep;
  rep.name = "derivative-doubling";
  double worst = 0.0;
  double witness = t_grid.empty() ? 0.0 : t_grid.front();
  for (double t : t_grid) {
    const double d1 = derivative(phi, t);
    const double d2 = derivative(phi, 2.0 * t);
    if (d1 <= 0.0 && d2 <= 0.0) continue;
    const double r = d1 <= 0.0 ? kInf : d2 / d1;
    if (r > worst) {
      worst = r;
      witness = t;
    }
  }
  rep.constant = Extended(worst);
  rep.witnesses = {witness};
  rep.pass = std::isfinite(worst);
  rep.detail = "sup Phi'(2t)/Phi'(t) = " + format_number(worst) + " at t = " + format_number(witness);
  return rep;
}

}  // namespace orlicz
