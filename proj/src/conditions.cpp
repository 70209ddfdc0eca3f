#include "orlicz/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "orlicz/numeric.hpp"
#include "orlicz/parse.hpp"

namespace orlicz {

std::string to_string(ScaleKind kind) {
  switch (kind) {
    case ScaleKind::IrA:
      return "ira";
    case ScaleKind::MrA:
      return "mra";
    case ScaleKind::CommIrA:
      return "commira";
    case ScaleKind::CommMrA:
      return "commmra";
  }
  return "ira";
}

ScaleKind parse_scale_kind(const std::string& text) {
  for (ScaleKind k : {ScaleKind::IrA, ScaleKind::MrA, ScaleKind::CommIrA, ScaleKind::CommMrA})
    if (to_string(k) == text) return k;
  throw ParseError(text, "unknown scale condition");
}

std::vector<double> default_scale_grid() { return dyadic_grid(-120, 120, 4); }

namespace {

constexpr double kTopAbscissa = 200.0;  // in u = ln t

// ∫_{u_i}^∞ h(u) du for every grid abscissa u_i, accumulated from the top.
std::vector<double> cumulative_tail(const std::function<double(double)>& h, const std::vector<double>& u,
                                    double& remainder_fraction) {
  const std::size_t n = u.size();
  std::vector<double> out(n, kInf);
  remainder_fraction = 0.0;
  const double top = std::max(u.back() + 1.0, kTopAbscissa);
  CompensatedSum acc;
  double a = u.back();
  double width = 1.0;
  while (a < top) {
    const double b = std::min(top, a + width);
    const double piece = integrate(h, a, b);
    if (!std::isfinite(piece)) return out;
    acc.add(piece);
    a = b;
    width *= 2.0;
  }
  const double h_top = h(top);
  double remainder = 0.0;
  if (!std::isfinite(h_top)) return out;
  if (h_top > 0.0) {
    // Local decay rate λ of h at the top; κ = λU is the power-law exponent in u.
    const double delta = top / 100.0;
    const double kappa = std::log(h(top - delta) / h_top) / delta * top;
    if (!(kappa > 1.0)) return out;
    remainder = h_top * top / (kappa - 1.0);
  }
  acc.add(remainder);
  double total_above = acc.value();
  remainder_fraction = total_above > 0.0 ? remainder / total_above : 0.0;
  out[n - 1] = total_above;
  for (std::size_t i = n - 1; i-- > 0;) {
    const double piece = integrate(h, u[i], u[i + 1]);
    if (!std::isfinite(piece)) return out;
    acc.add(piece);
    out[i] = acc.value();
  }
  return out;
}

const YoungFunction& need(const std::optional<YoungFunction>& y, const char* what) {
  if (!y) throw std::invalid_argument(std::string("invalid combination: missing ") + what);
  return *y;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// The `window` outermost ratios increase toward the end.
bool increasing_toward_end(const std::vector<double>& ratios, bool right, std::size_t window) {
  const std::size_t n = ratios.size();
  if (ratios.size() < window) return false;
  for (std::size_t j = 1; j < window; ++j) {
    const double inner = right ? ratios[n - 1 - j] : ratios[j];
    const double outer = right ? ratios[n - j] : ratios[j - 1];
    if (!(outer > inner)) return false;
  }
  return true;
}

struct Verdict {
  double a = 0.0;
  double flatness = 0.0;
  double end_factor = 0.0;
  bool left = false;
  bool right = false;
  bool pass = false;
};

Verdict judge(const std::vector<double>& r, const std::vector<double>& lhs, const std::vector<double>& rhs,
              std::vector<std::pair<double, double>>& profile) {
  const std::size_t m = r.size();
  std::vector<double> ratios(m);
  for (std::size_t i = 0; i < m; ++i) {
    double q;
    if (lhs[i] == 0.0) q = 0.0;
    else if (!(rhs[i] > 0.0) || !std::isfinite(lhs[i])) q = kInf;
    else q = lhs[i] / rhs[i];
    ratios[i] = q;
    profile.emplace_back(r[i], q);
  }
  Verdict v;
  v.a = *std::max_element(ratios.begin(), ratios.end());
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  v.flatness = (lo > 0.0 && std::isfinite(lo)) ? v.a / lo : (v.a == 0.0 ? 1.0 : kInf);
  const double med = median_of(ratios);
  const double end = std::max(ratios.front(), ratios.back());
  if (std::isinf(med)) v.end_factor = 1.0;
  else v.end_factor = med > 0.0 ? end / med : (end > 0.0 ? kInf : 1.0);
  constexpr std::size_t window = 8;
  constexpr double blowup = 1e3;
  v.left = increasing_toward_end(ratios, false, window) && ratios.front() >= blowup * med;
  v.right = increasing_toward_end(ratios, true, window) && ratios.back() >= blowup * med;
  v.pass = std::isfinite(v.a) && !v.left && !v.right;
  return v;
}

void require_grid(const std::vector<double>& r_grid, int n) {
  if (r_grid.size() < 2) throw std::invalid_argument("scale grid needs at least 2 points");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0) || (i > 0 && !(r_grid[i] > r_grid[i - 1])))
      throw std::invalid_argument("scale grid must be positive and increasing");
  }
  if (n < 1) throw std::invalid_argument("dimension must be positive");
}

}  // namespace

ScaleConditionReport check_scale_condition(ScaleKind kind, const ScaleInputs& in, const std::vector<double>& r_grid) {
  require_grid(r_grid, in.n);
  const double n = in.n;

  const YoungFunction* target = nullptr;
  switch (kind) {
    case ScaleKind::IrA:
    case ScaleKind::MrA:
      target = &need(in.psi, "target Young function");
      break;
    case ScaleKind::CommIrA:
      target = &need(in.theta, "commutator Young function");
      break;
    case ScaleKind::CommMrA:
      need(in.theta, "commutator Young function");
      target = &need(in.psi, "target Young function");
      if (!in.weight) throw std::invalid_argument("invalid combination: missing weight");
      break;
  }

  const std::size_t m = r_grid.size();
  std::vector<double> lhs(m);
  double remainder_fraction = 0.0;
  if (kind == ScaleKind::IrA || kind == ScaleKind::CommIrA) {
    const YoungFunction& phi = in.phi;
    const Kernel& rho = in.rho;
    auto h = [&](double u) { return ext_mul(rho(std::exp(u)), phi.inverse(std::exp(-n * u))); };
    std::vector<double> u(m);
    for (std::size_t i = 0; i < m; ++i) u[i] = std::log(r_grid[i]);
    const auto tail = cumulative_tail(h, u, remainder_fraction);
    for (std::size_t i = 0; i < m; ++i) {
      const double r = r_grid[i];
      lhs[i] = ext_mul(rho.rho_star(r), phi.inverse(std::pow(r, -n))) + tail[i];
    }
  } else if (kind == ScaleKind::MrA) {
    const Kernel sup = in.rho.running_sup();
    for (std::size_t i = 0; i < m; ++i) lhs[i] = ext_mul(sup(r_grid[i]), in.phi.inverse(std::pow(r_grid[i], -n)));
  } else {
    for (std::size_t i = 0; i < m; ++i)
      lhs[i] = ext_mul((*in.weight)(r_grid[i]), in.theta->inverse(std::pow(r_grid[i], -n)));
  }

  ScaleConditionReport rep;
  rep.kind = kind;
  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < m; ++i) rhs[i] = target->inverse(std::pow(r_grid[i], -n));
  const Verdict v = judge(r_grid, lhs, rhs, rep.ratio_profile);
  rep.fitted_A = Extended(v.a);
  rep.flatness = v.flatness;
  rep.end_factor = v.end_factor;
  rep.pass = v.pass;

  rep.detail = to_string(kind) + ": A " + format_number(v.a) + ", flatness " + format_number(rep.flatness) +
               ", end factor " + format_number(rep.end_factor);
  if (v.left) rep.detail += ", ratio grows as r -> 0";
  if (v.right) rep.detail += ", ratio grows as r -> inf";
  if (kind == ScaleKind::IrA || kind == ScaleKind::CommIrA)
    rep.detail += ", tail remainder fraction " + format_number(remainder_fraction);
  return rep;
}

CheckReport check_lower_bound_hypothesis(double alpha, const YoungFunction& phi, const YoungFunction& psi,
                                         const WeightDescriptor& weight, int n, const std::vector<double>& r_grid) {
  require_grid(r_grid, n);
  const std::size_t m = r_grid.size();
  std::vector<double> lhs(m), rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = std::pow(r_grid[i], -static_cast<double>(n));
    lhs[i] = psi.inverse(u);
    rhs[i] = ext_mul(std::pow(r_grid[i], alpha) * weight(r_grid[i]), phi.inverse(u));
  }
  std::vector<std::pair<double, double>> profile;
  const Verdict v = judge(r_grid, lhs, rhs, profile);
  CheckReport rep;
  rep.name = "lower-bound-hypothesis";
  rep.pass = v.pass;
  rep.constant = Extended(v.a);
  for (const auto& [r, q] : profile)
    if (q == v.a) {
      rep.witnesses.push_back(r);
      break;
    }
  rep.detail = "A " + format_number(v.a) + ", flatness " + format_number(v.flatness) + ", end factor " +
               format_number(v.end_factor);
  return rep;
}

double mra_quotient_constant(const YoungFunction& phi, const YoungFunction& psi, int n,
                             const std::vector<double>& r_grid) {
  std::vector<double> values;
  values.reserve(r_grid.size());
  for (double r : r_grid) {
    const double u = std::pow(r, -static_cast<double>(n));
    values.push_back(psi.inverse(u) / (phi.inverse(u) * std::pow(r, static_cast<double>(n))));
  }
  return almost_decreasing_constant(values);
}

TargetYoung construct_target_young(double s, const Kernel& rho, int n, const std::vector<double>& r_grid) {
  if (!(s >= 1.0) || !std::isfinite(s)) throw std::invalid_argument("target exponent must be finite and >= 1");
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  if (!rho.integrable_at_zero()) throw std::domain_error("kernel not integrable at 0");
  const double e0 = static_cast<double>(n) / s;

  double epsilon = 0.0;
  for (double frac : {0.5, 0.25, 0.1, 0.05, 0.01, 0.001}) {
    const double eps = frac * e0;
    if (kernel_power_ratio_constant(rho, e0 - eps, r_grid) <= 4.0) {
      epsilon = eps;
      break;
    }
  }
  if (!(epsilon > 0.0)) throw std::domain_error("no epsilon > 0 makes rho/r^(n/s - eps) almost decreasing");

  const std::size_t m = r_grid.size();
  std::vector<double> g(m), envelope(m);
  double running = kInf;
  for (std::size_t i = 0; i < m; ++i) {
    g[i] = std::pow(r_grid[i], -e0) * rho.rho_star(r_grid[i]);
    running = std::min(running, g[i]);
    envelope[i] = running;
  }
  // Ψ(envelope(r)) = 1/rⁿ, listed by increasing envelope (decreasing r); on flats keep the smallest r.
  std::vector<double> t, v;
  for (std::size_t i = m; i-- > 0;) {
    const double value = std::pow(r_grid[i], -static_cast<double>(n));
    if (!t.empty() && envelope[i] <= t.back()) {
      v.back() = std::max(v.back(), value);
      continue;
    }
    t.push_back(envelope[i]);
    v.push_back(value);
  }
  TargetYoung out{YoungFunction::tabulated(t, v), 1.0, epsilon};
  double c = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double inv = out.psi.inverse(std::pow(r_grid[i], -static_cast<double>(n)));
    c = std::max({c, g[i] / inv, inv / g[i]});
  }
  out.sandwich_c = c;
  return out;
}

void write_profile_csv(std::ostream& out, const ScaleConditionReport& report) {
  out << "r,ratio\n";
  for (const auto& [r, q] : report.ratio_profile) out << format_number(r) << ',' << format_number(q) << '\n';
}

}  // namespace orlicz
