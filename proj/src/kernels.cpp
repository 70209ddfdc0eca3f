#include "orlicz/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/expint.hpp>

#include "orlicz/numeric.hpp"
#include "orlicz/parse.hpp"

namespace orlicz {

namespace {

constexpr double kE = 2.718281828459045;
constexpr int kLatticeLo = -1280;
constexpr int kLatticeHi = 2560;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double lattice(int k) { return std::exp2(static_cast<double>(k) / 16.0); }

// ∫_a^b ρ(t)/t dt in the variable s = log t, split at the kernel's breakpoints.
double window_integral(const Kernel& k, double a, double b) {
  std::vector<double> cuts{a};
  for (double p : k.breakpoints()) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate([&k](double s) { return k(std::exp(s)); }, std::log(cuts[i]), std::log(cuts[i + 1]), 1e-10);
  }
  return total;
}

}  // namespace

Kernel Kernel::power_alpha(double alpha) {
  require(alpha >= 0.0 && std::isfinite(alpha), "power kernel: alpha must be >= 0");
  Kernel k;
  k.family_ = KernelFamily::PowerAlpha;
  k.alpha_ = alpha;
  return k;
}

Kernel Kernel::log_kernel(double alpha) {
  require(alpha > 0.0 && std::isfinite(alpha), "logker: alpha must be > 0");
  Kernel k;
  k.family_ = KernelFamily::LogKernel;
  k.alpha_ = alpha;
  return k;
}

Kernel Kernel::max_log(double alpha) {
  require(alpha >= 0.0 && std::isfinite(alpha), "maxlog: alpha must be >= 0");
  Kernel k;
  k.family_ = KernelFamily::MaxLogKernel;
  k.alpha_ = alpha;
  return k;
}

Kernel Kernel::power_log(double alpha, double alpha1) {
  require(alpha > 0.0 && std::isfinite(alpha) && std::isfinite(alpha1), "powerlog kernel: alpha must be > 0");
  Kernel k;
  k.family_ = KernelFamily::PowerLogKernel;
  k.alpha_ = alpha;
  k.alpha1_ = alpha1;
  return k;
}

Kernel Kernel::power_exp_cut(double alpha) {
  require(alpha > 0.0 && std::isfinite(alpha), "powerexp: alpha must be > 0");
  Kernel k;
  k.family_ = KernelFamily::PowerExpCut;
  k.alpha_ = alpha;
  return k;
}

Kernel Kernel::tabulated(std::vector<double> r, std::vector<double> value) {
  require(r.size() >= 2 && r.size() == value.size(), "kernel table: need at least two matching rows");
  for (std::size_t i = 0; i < r.size(); ++i) {
    require(r[i] > 0.0 && std::isfinite(r[i]), "kernel table: r must be positive");
    require(value[i] > 0.0 && std::isfinite(value[i]), "kernel table: values must be positive");
    if (i > 0) require(r[i] >= r[i - 1], "kernel table: r must be nondecreasing");
    if (i > 1) require(!(r[i] == r[i - 1] && r[i] == r[i - 2]), "kernel table: at most two rows per r");
  }
  require(r.front() < r.back(), "kernel table: r range is degenerate");
  require(r[0] < r[1] && r[r.size() - 2] < r.back(), "kernel table: no jump at the end points");
  Kernel k;
  k.family_ = KernelFamily::Tabulated;
  k.tab_r_ = std::move(r);
  k.tab_v_ = std::move(value);
  return k;
}

Kernel Kernel::parse(const std::string& text) {
  const DescriptorText d = split_descriptor(text);
  if (d.family == "power") {
    require_keys(d, {"alpha"});
    return power_alpha(param(d, "alpha"));
  }
  if (d.family == "logker") {
    require_keys(d, {"alpha"});
    return log_kernel(param(d, "alpha"));
  }
  if (d.family == "maxlog") {
    require_keys(d, {"alpha"});
    return max_log(param(d, "alpha"));
  }
  if (d.family == "powerlog") {
    require_keys(d, {"alpha", "alpha1"});
    return power_log(param(d, "alpha"), param(d, "alpha1"));
  }
  if (d.family == "powerexp") {
    require_keys(d, {"alpha"});
    return power_exp_cut(param(d, "alpha"));
  }
  if (d.family == "table") {
    std::vector<double> r;
    std::vector<double> v;
    for (const auto& [a, b] : read_pairs(d.path)) {
      r.push_back(a);
      v.push_back(b);
    }
    try {
      return tabulated(std::move(r), std::move(v));
    } catch (const std::invalid_argument& e) {
      throw ParseError(d.path, e.what());
    }
  }
  throw ParseError(d.family, "unknown kernel family");
}

Kernel Kernel::running_sup() const {
  Kernel k;
  k.family_ = KernelFamily::RunningSup;
  k.base_ = std::make_shared<const Kernel>(*this);
  auto prefix = std::make_shared<std::vector<double>>();
  prefix->reserve(kLatticeHi - kLatticeLo + 1);
  double running = 0.0;
  for (int j = kLatticeLo; j <= kLatticeHi; ++j) {
    running = std::max(running, (*this)(lattice(j)));
    prefix->push_back(running);
  }
  k.prefix_max_ = std::move(prefix);
  return k;
}

double Kernel::tab_eval(double r) const {
  const auto& x = tab_r_;
  const auto& v = tab_v_;
  const std::size_t n = x.size();
  auto slope = [&](std::size_t i) { return std::log(v[i + 1] / v[i]) / std::log(x[i + 1] / x[i]); };
  if (r < x[0]) return v[0] * std::pow(r / x[0], slope(0));
  const std::size_t idx = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), r) - x.begin()) - 1;
  if (idx == n - 1) return v[n - 1] * std::pow(r / x[n - 1], slope(n - 2));
  if (r == x[idx]) return v[idx];
  return v[idx] * std::pow(r / x[idx], slope(idx));
}

double Kernel::operator()(double r) const {
  if (!(r > 0.0)) throw std::domain_error("kernel evaluated at a nonpositive point");
  switch (family_) {
    case KernelFamily::PowerAlpha:
      return alpha_ == 0.0 ? 1.0 : std::pow(r, alpha_);
    case KernelFamily::LogKernel:
      if (r <= 1.0 / kE) return std::pow(std::log(1.0 / r), -(alpha_ + 1.0));
      if (r >= kE) return std::pow(std::log(r), alpha_ - 1.0);
      return 1.0;
    case KernelFamily::MaxLogKernel:
      if (r <= 1.0 / kE) return std::pow(std::log(1.0 / r), -alpha_);
      if (r >= kE) return std::pow(std::log(r), alpha_);
      return 1.0;
    case KernelFamily::PowerLogKernel:
      if (r <= 1.0 / kE) return std::pow(r, alpha_) * std::pow(std::log(1.0 / r), -alpha1_);
      if (r >= kE) return std::pow(r, alpha_) * std::pow(std::log(r), alpha1_);
      return std::pow(r, alpha_);
    case KernelFamily::PowerExpCut: {
      if (r <= 1.0 / kE) return std::pow(r, alpha_);
      if (r >= kE) return std::exp(-r);
      const double k = (alpha_ - kE) / 2.0;
      return std::exp(-alpha_) * std::pow(kE * r, k);
    }
    case KernelFamily::Tabulated:
      return tab_eval(r);
    case KernelFamily::RunningSup: {
      const double own = (*base_)(r);
      int j = static_cast<int>(std::floor(16.0 * std::log2(r)));
      while (j + 1 <= kLatticeHi && lattice(j + 1) <= r) ++j;
      while (j >= kLatticeLo && lattice(j) > r) --j;
      if (j < kLatticeLo) return own;
      j = std::min(j, kLatticeHi);
      return std::max((*prefix_max_)[static_cast<std::size_t>(j - kLatticeLo)], own);
    }
  }
  return 0.0;
}

double Kernel::tab_rho_star(double r) const {
  const auto& x = tab_r_;
  const auto& v = tab_v_;
  const std::size_t n = x.size();
  auto slope = [&](std::size_t i) { return std::log(v[i + 1] / v[i]) / std::log(x[i + 1] / x[i]); };
  // ∫_a^b v_a (t/a)^k dt/t
  auto piece = [](double a, double va, double b, double k) {
    if (k == 0.0) return va * std::log(b / a);
    return va * std::expm1(k * std::log(b / a)) / k;
  };
  const double k0 = slope(0);
  if (k0 <= 0.0) return kInf;
  if (r <= x[0]) return v[0] * std::pow(r / x[0], k0) / k0;
  double total = v[0] / k0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (x[i + 1] == x[i]) continue;
    const double b = std::min(r, x[i + 1]);
    total += piece(x[i], v[i], b, slope(i));
    if (r <= x[i + 1]) return total;
  }
  return total + piece(x[n - 1], v[n - 1], r, slope(n - 2));
}

double Kernel::numeric_rho_star(double r) const {
  return integrate_tail([this, r](double x) { return (*this)(r * std::exp(-x)); }, 0.0, 1e-10);
}

double Kernel::rho_star(double r) const {
  if (!(r > 0.0)) throw std::domain_error("rho* evaluated at a nonpositive point");
  if (std::isinf(r)) return kInf;
  switch (family_) {
    case KernelFamily::PowerAlpha:
      return alpha_ == 0.0 ? kInf : std::pow(r, alpha_) / alpha_;
    case KernelFamily::LogKernel:
      if (r <= 1.0 / kE) return std::pow(std::log(1.0 / r), -alpha_) / alpha_;
      if (r <= kE) return 1.0 / alpha_ + std::log(r) + 1.0;
      return 1.0 / alpha_ + 2.0 + (std::pow(std::log(r), alpha_) - 1.0) / alpha_;
    case KernelFamily::MaxLogKernel:
      if (alpha_ <= 1.0) return kInf;
      if (r <= 1.0 / kE) return std::pow(std::log(1.0 / r), 1.0 - alpha_) / (alpha_ - 1.0);
      if (r <= kE) return 1.0 / (alpha_ - 1.0) + std::log(r) + 1.0;
      return 1.0 / (alpha_ - 1.0) + 2.0 + (std::pow(std::log(r), alpha_ + 1.0) - 1.0) / (alpha_ + 1.0);
    case KernelFamily::PowerLogKernel: {
      const double a = alpha_;
      const double a1 = alpha1_;
      auto small = [a, a1](double L) {
        return integrate_tail([a, a1](double u) { return std::exp(-a * u) * std::pow(u, -a1); }, L, 1e-11);
      };
      if (r <= 1.0 / kE) return small(std::log(1.0 / r));
      const double at_inv_e = small(1.0);
      if (r <= kE) return at_inv_e + (std::pow(r, a) - std::exp(-a)) / a;
      const double at_e = at_inv_e + (std::exp(a) - std::exp(-a)) / a;
      return at_e + integrate([a, a1](double u) { return std::exp(a * u) * std::pow(u, a1); }, 1.0, std::log(r), 1e-11);
    }
    case KernelFamily::PowerExpCut: {
      const double a = alpha_;
      if (r <= 1.0 / kE) return std::pow(r, a) / a;
      const double k = (a - kE) / 2.0;
      const double amp = std::exp(-a + k);
      auto bridge = [amp, k](double x) {
        if (k == 0.0) return amp * (std::log(x) + 1.0);
        return amp * (std::pow(x, k) - std::exp(-k)) / k;
      };
      const double at_inv_e = std::exp(-a) / a;
      if (r <= kE) return at_inv_e + bridge(r);
      const double e1r = r > 700.0 ? 0.0 : boost::math::expint(1, r);
      return at_inv_e + bridge(kE) + boost::math::expint(1, kE) - e1r;
    }
    case KernelFamily::Tabulated:
      return tab_rho_star(r);
    case KernelFamily::RunningSup:
      return numeric_rho_star(r);
  }
  return kInf;
}

bool Kernel::integrable_at_zero() const { return std::isfinite(rho_star(1.0)); }

std::vector<double> Kernel::breakpoints() const {
  switch (family_) {
    case KernelFamily::PowerAlpha:
      return {};
    case KernelFamily::Tabulated: {
      std::vector<double> out = tab_r_;
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }
    case KernelFamily::RunningSup:
      return base_->breakpoints();
    default:
      return {1.0 / kE, kE};
  }
}

std::string Kernel::describe() const {
  switch (family_) {
    case KernelFamily::PowerAlpha:
      return "power:alpha=" + format_number(alpha_);
    case KernelFamily::LogKernel:
      return "logker:alpha=" + format_number(alpha_);
    case KernelFamily::MaxLogKernel:
      return "maxlog:alpha=" + format_number(alpha_);
    case KernelFamily::PowerLogKernel:
      return "powerlog:alpha=" + format_number(alpha_) + ",alpha1=" + format_number(alpha1_);
    case KernelFamily::PowerExpCut:
      return "powerexp:alpha=" + format_number(alpha_);
    case KernelFamily::Tabulated:
      return "table[" + std::to_string(tab_r_.size()) + " rows]";
    case KernelFamily::RunningSup:
      return "runsup(" + base_->describe() + ")";
  }
  return "?";
}

std::vector<double> default_kernel_grid() { return dyadic_grid(-60, 60, 4); }

double almost_decreasing_constant(const std::vector<double>& values) {
  double worst = 1.0;
  double min_prev = kInf;
  for (double g : values) {
    if (min_prev < kInf) {
      if (min_prev == 0.0) {
        if (g > 0.0) return kInf;
      } else {
        worst = std::max(worst, g / min_prev);
      }
    }
    min_prev = std::min(min_prev, g);
  }
  return worst;
}

double almost_increasing_constant(const std::vector<double>& values) {
  std::vector<double> rev(values.rbegin(), values.rend());
  return almost_decreasing_constant(rev);
}

namespace {

// Almost-decreasing constant of exp(log_rho - k log r) computed in log space.
double log_ad_constant(const std::vector<double>& log_rho, const std::vector<double>& log_r, double k) {
  double worst = 0.0;
  double min_prev = kInf;
  for (std::size_t i = 0; i < log_rho.size(); ++i) {
    const double lg = log_rho[i] - k * log_r[i];
    if (min_prev < kInf) worst = std::max(worst, lg - min_prev);
    min_prev = std::min(min_prev, lg);
  }
  return std::exp(worst);
}

}  // namespace

double kernel_power_ratio_constant(const Kernel& k, double exponent, const std::vector<double>& r_grid) {
  std::vector<double> lr;
  std::vector<double> lrho;
  for (double r : r_grid) {
    const double v = k(r);
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    lr.push_back(std::log(r));
    lrho.push_back(std::log(v));
  }
  return log_ad_constant(lrho, lr, exponent);
}

KernelConditions check_kernel_conditions(const Kernel& k, int n, const std::vector<double>& r_grid) {
  if (n != 1 && n != 2) throw std::invalid_argument("check_kernel_conditions: n must be 1 or 2");
  if (r_grid.empty()) throw std::invalid_argument("check_kernel_conditions: empty grid");
  KernelConditions out;
  const double nd = static_cast<double>(n);

  const double star1 = k.rho_star(1.0);
  out.integrable.name = "integrable-at-zero";
  out.integrable.pass = std::isfinite(star1);
  out.integrable.constant = Extended(star1);
  out.integrable.witnesses = {1.0};
  out.integrable.detail = "rho*(1) = " + format_number(star1);

  {
    out.lipschitz.name = "lipschitz";
    if (!out.integrable.pass) {
      out.lipschitz.pass = false;
      out.lipschitz.constant = Extended::infinity();
      out.lipschitz.detail = "rho* diverges, condition not applicable";
    } else {
      double worst = 0.0;
      double wr = r_grid.front();
      double ws = r_grid.front();
      for (double r : log_grid(r_grid.front(), r_grid.back(), 64)) {
        const double star = k.rho_star(r);
        const double gr = k(r) / std::pow(r, nd);
        for (int j = -8; j <= 8; ++j) {
          if (j == 0) continue;
          const double s = r * std::exp2(j / 8.0);
          const double gs = k(s) / std::pow(s, nd);
          const double rhs_unit = std::abs(r - s) * star / std::pow(r, nd + 1.0);
          const double diff = std::abs(gr - gs);
          if (diff == 0.0) continue;
          const double c = rhs_unit > 0.0 ? diff / rhs_unit : kInf;
          if (c > worst) {
            worst = c;
            wr = r;
            ws = s;
          }
        }
      }
      out.lipschitz.pass = std::isfinite(worst);
      out.lipschitz.constant = Extended(worst);
      out.lipschitz.witnesses = {wr, ws};
      out.lipschitz.detail = "C_rho = " + format_number(worst) + " at (r, s) = (" + format_number(wr) + ", " + format_number(ws) + ")";
    }
  }

  std::vector<double> lr;
  std::vector<double> lrho;
  std::vector<double> used_r;
  for (double r : r_grid) {
    const double v = k(r);
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    used_r.push_back(r);
    lr.push_back(std::log(r));
    lrho.push_back(std::log(v));
  }
  out.almost_decreasing.name = "almost-decreasing";
  double eps = 0.0;
  double ad = kInf;
  if (k.family() == KernelFamily::PowerAlpha) {
    if (k.alpha() < nd) {
      eps = nd - k.alpha();
      ad = log_ad_constant(lrho, lr, k.alpha());
    }
  } else {
    const int steps = static_cast<int>(std::lround(nd * 1000.0));
    for (int j = steps - 1; j >= 1; --j) {
      const double e = j * 1e-3;
      const double c = log_ad_constant(lrho, lr, nd - e);
      if (c <= 4.0) {
        eps = e;
        ad = c;
        break;
      }
    }
  }
  out.epsilon = eps;
  out.almost_decreasing.pass = eps > 0.0;
  out.almost_decreasing.constant = Extended(ad);
  out.almost_decreasing.witnesses = {eps};
  out.almost_decreasing.detail = eps > 0.0 ? "rho(r)/r^(n-eps) almost decreasing with eps = " + format_number(eps) +
                                                 ", constant " + format_number(ad)
                                           : "no eps in (0, n) found";

  {
    // Baseline cap, raised to the bound implied by an almost-decreasing certificate:
    // ρ(s) ≤ C_ad 4^k ρ(t) for t ∈ [r/2, r], s ∈ [r, 2r] gives C ≤ C_ad 4^k / log 2.
    double cap = std::exp2(nd + 2.0);
    if (out.almost_decreasing.pass) cap = std::max(cap, ad * std::pow(4.0, nd - eps) / std::log(2.0));
    double worst = 0.0;
    double witness = r_grid.front();
    const auto bps = k.breakpoints();
    for (double r : r_grid) {
      double sup = 0.0;
      for (double t : log_grid(r, 2.0 * r, 33)) sup = std::max(sup, k(t));
      for (double b : bps) {
        if (b >= r && b <= 2.0 * r) sup = std::max({sup, k(b), k(b * (1.0 - 1e-12))});
      }
      const double integral = window_integral(k, 0.5 * r, r);
      if (sup == 0.0 && integral == 0.0) continue;
      const double c = integral > 0.0 ? sup / integral : kInf;
      if (c > worst) {
        worst = c;
        witness = r;
      }
    }
    out.sup_doubling.name = "sup-doubling";
    out.sup_doubling.constant = Extended(worst);
    out.sup_doubling.witnesses = {witness};
    out.sup_doubling.pass = std::isfinite(worst) && worst <= cap;
    out.sup_doubling.detail = "C = " + format_number(worst) + " with K1 = 1/2, K2 = 1 (cap " + format_number(cap) +
                              ") worst at r = " + format_number(witness);
  }

  out.propagation.name = "rho*-almost-decreasing";
  if (out.almost_decreasing.pass && out.integrable.pass) {
    const double kexp = nd - eps;
    std::vector<double> g;
    for (double r : used_r) g.push_back(k.rho_star(r) / std::pow(r, kexp));
    const double c_star = almost_decreasing_constant(g);
    const double bound = 1.0 + ad * ad;
    out.propagation.pass = c_star <= bound * (1.0 + 1e-9);
    out.propagation.constant = Extended(c_star);
    out.propagation.witnesses = {bound};
    out.propagation.detail = "rho*(r)/r^(n-eps) constant " + format_number(c_star) + " against bound " + format_number(bound);
  } else {
    out.propagation.pass = false;
    out.propagation.constant = Extended::infinity();
    out.propagation.detail = "hypothesis not certified";
  }

  out.rho_star_doubling.name = "rho*-doubling";
  {
    double worst = 0.0;
    double witness = r_grid.front();
    for (double r : r_grid) {
      const double a = k.rho_star(r);
      const double b = k.rho_star(2.0 * r);
      if (std::isinf(a) || a == 0.0) {
        worst = kInf;
        witness = r;
        break;
      }
      if (b / a > worst) {
        worst = b / a;
        witness = r;
      }
    }
    out.rho_star_doubling.pass = std::isfinite(worst);
    out.rho_star_doubling.constant = Extended(worst);
    out.rho_star_doubling.witnesses = {witness};
    out.rho_star_doubling.detail = "sup rho*(2r)/rho*(r) = " + format_number(worst);
  }
  return out;
}

}  // namespace orlicz
