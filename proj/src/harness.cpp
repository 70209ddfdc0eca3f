#include "orlicz/harness.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include "orlicz/numeric.hpp"

namespace orlicz {

TestFamily TestFamily::dilated_chi(std::vector<double> lambdas, std::size_t cells, bool dilate_grid, int n) {
  TestFamily t;
  t.generator = FamilyGenerator::DilatedChi;
  t.parameters = std::move(lambdas);
  t.cells = cells;
  t.dilate_grid = dilate_grid;
  t.n = n;
  return t;
}

TestFamily TestFamily::translated_bump(std::vector<double> shifts, std::size_t cells) {
  TestFamily t;
  t.generator = FamilyGenerator::TranslatedBump;
  t.parameters = std::move(shifts);
  t.cells = cells;
  return t;
}

TestFamily TestFamily::random_step(std::uint64_t seed, std::size_t count, std::size_t cells) {
  TestFamily t;
  t.generator = FamilyGenerator::RandomStep;
  t.seed = seed;
  t.count = count;
  t.cells = cells;
  return t;
}

TestFamily TestFamily::commutator_pair(std::string b_name, std::vector<double> lambdas, std::size_t cells) {
  TestFamily t;
  t.generator = FamilyGenerator::CommutatorPair;
  t.parameters = std::move(lambdas);
  t.cells = cells;
  t.dilate_grid = false;
  t.b_name = std::move(b_name);
  return t;
}

namespace {

GridGeometry square_box(int n, double h, double x0, std::size_t cells) {
  return n == 1 ? GridGeometry::line(h, x0, cells) : GridGeometry::plane(h, x0, x0, cells, cells);
}

std::vector<FamilyMember> chi_members(const TestFamily& t) {
  if (t.parameters.empty()) throw std::invalid_argument("family needs at least one dilation");
  if (t.cells % 8 != 0) throw std::invalid_argument("dilated family needs a multiple of 8 cells");
  const double big = *std::max_element(t.parameters.begin(), t.parameters.end());
  std::vector<FamilyMember> out;
  for (double lambda : t.parameters) {
    if (!(lambda > 0.0)) throw std::invalid_argument("dilations must be positive");
    const double extent = t.dilate_grid ? lambda : big;
    const double h = 8.0 * extent / static_cast<double>(t.cells);
    if (lambda < h) throw std::invalid_argument("dilation below the cell size");
    const GridGeometry g = square_box(t.n, h, -3.0 * extent, t.cells);
    const int n = t.n;
    FamilyMember m;
    m.f = GridFunction::sample(g, [lambda, n](double x, double y) {
      const bool in = x >= 0.0 && x < lambda && (n == 1 || (y >= 0.0 && y < lambda));
      return in ? 1.0 : 0.0;
    });
    if (t.generator == FamilyGenerator::CommutatorPair) m.b = make_builtin(t.b_name, g);
    m.parameter = lambda;
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<FamilyMember> bump_members(const TestFamily& t) {
  if (t.parameters.empty()) throw std::invalid_argument("family needs at least one translation");
  const double lo = *std::min_element(t.parameters.begin(), t.parameters.end()) - 4.0;
  const double hi = *std::max_element(t.parameters.begin(), t.parameters.end()) + 4.0;
  const double h = (hi - lo) / static_cast<double>(t.cells);
  const GridGeometry g = t.n == 1 ? GridGeometry::line(h, lo, t.cells)
                                  : GridGeometry::plane(h, lo, -(hi - lo) / 2.0, t.cells, t.cells);
  std::vector<FamilyMember> out;
  for (double s : t.parameters) {
    FamilyMember m;
    m.f = GridFunction::sample(g, [s](double x, double y) { return std::max(0.0, 1.0 - std::hypot(x - s, y)); });
    m.parameter = s;
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<FamilyMember> step_members(const TestFamily& t) {
  if (t.cells < 32 || t.cells % 32 != 0) throw std::invalid_argument("random steps need a multiple of 32 cells");
  const std::size_t data = t.cells / 32;
  const GridGeometry g = GridGeometry::line(32.0 / static_cast<double>(t.cells), 0.0, t.cells);
  std::mt19937_64 rng(t.seed);
  std::uniform_int_distribution<int> gen(0, 3);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<FamilyMember> out;
  for (std::size_t k = 0; k < t.count; ++k) {
    const std::size_t block = std::min<std::size_t>(std::size_t{1} << gen(rng), data);
    std::vector<double> v(g.size(), 0.0);
    for (std::size_t i = 0; i < data; i += block) {
      const double level = val(rng);
      for (std::size_t j = i; j < std::min(i + block, data); ++j) v[j] = level;
    }
    FamilyMember m;
    m.f = GridFunction(g, std::move(v));
    m.parameter = static_cast<double>(k);
    out.push_back(std::move(m));
  }
  return out;
}

void finish(FitReport& r) {
  if (r.member_ratios.empty()) {
    r.fitted = 0.0;
    r.stability = 1.0;
    r.pass = true;
    return;
  }
  const auto [lo, hi] = std::minmax_element(r.member_ratios.begin(), r.member_ratios.end());
  r.fitted = *hi;
  if (*hi == 0.0) r.stability = 1.0;
  else r.stability = *lo > 0.0 ? *hi / *lo : kInf;
  r.pass = std::isfinite(r.fitted) && r.stability <= r.cap;
}

std::string ratio_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_number(v[i]);
  return s;
}

double pointwise_fit(PointwiseKind which, const Kernel& rho, const YoungFunction& phi, const YoungFunction& psi,
                     const GridFunction& f, double c0, double* where = nullptr) {
  if (!(c0 > 0.0)) throw std::invalid_argument("C0 must be positive");
  const double norm = luxemburg_norm(f, phi);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("f needs a finite positive norm");
  const GridGeometry eval = f.geometry().refined(2);
  const BallFamily balls = BallFamily::standard(f.geometry());
  const GridFunction t = which == PointwiseKind::Ir
                             ? frac_integral(rho, f, eval)
                             : maximal(maximal_variant::Fractional{rho}, f, eval, balls);
  const GridFunction m = maximal(maximal_variant::HL{}, f, eval, balls);
  double best = 0.0;
  for (std::size_t i = 0; i < t.values().size(); ++i) {
    const double a = std::abs(t.values()[i]);
    if (a == 0.0) continue;
    const double inv = psi.inverse(phi(m.values()[i] / (c0 * norm)));
    double c;
    if (inv == 0.0) c = kInf;
    else if (std::isinf(inv)) c = 0.0;
    else c = a / (norm * inv);
    if (c > best) {
      best = c;
      if (where) *where = eval.center_x(i % eval.nx);
    }
  }
  return best;
}

void require_scale(PointwiseKind which, const Kernel& rho, const YoungFunction& phi, const YoungFunction& psi,
                   int n) {
  ScaleInputs in;
  in.rho = rho;
  in.phi = phi;
  in.psi = psi;
  in.n = n;
  const auto rep = check_scale_condition(which == PointwiseKind::Ir ? ScaleKind::IrA : ScaleKind::MrA, in);
  if (!rep.pass) throw std::invalid_argument("scale condition not certified: " + rep.detail);
}

double campanato_one(const GridFunction& b) {
  return campanato_norm(b, WeightDescriptor::one(), 1.0, BallFamily::standard(b.geometry())).value;
}

bool dyadic_aligned(const GridGeometry& g) {
  int e = 0;
  const double mant = std::frexp(g.h, &e);
  auto on_lattice = [&](double x) { return std::floor(x / g.h) == x / g.h; };
  return mant == 0.5 && on_lattice(g.x0) && (g.dim == 1 || on_lattice(g.y0));
}

}  // namespace

std::vector<FamilyMember> TestFamily::members() const {
  std::vector<FamilyMember> out;
  switch (generator) {
    case FamilyGenerator::DilatedChi:
    case FamilyGenerator::CommutatorPair:
      out = chi_members(*this);
      break;
    case FamilyGenerator::TranslatedBump:
      out = bump_members(*this);
      break;
    case FamilyGenerator::RandomStep:
      out = step_members(*this);
      break;
  }
  if (normalize) {
    for (auto& m : out) {
      const double nrm = luxemburg_norm(m.f, *normalize);
      if (nrm > 0.0 && std::isfinite(nrm)) m.f = m.f.scaled(1.0 / nrm);
    }
  }
  return out;
}

std::vector<double> dyadic_scales(int lo, int hi) {
  std::vector<double> out;
  for (int k = lo; k <= hi; ++k) out.push_back(std::ldexp(1.0, k));
  return out;
}

FitReport verify_pointwise_domination(PointwiseKind which, const Kernel& rho, const YoungFunction& phi,
                                      const YoungFunction& psi, const GridFunction& f, double c0) {
  require_scale(which, rho, phi, psi, f.dim());
  FitReport r;
  r.name = which == PointwiseKind::Ir ? "pointwise-ir" : "pointwise-mr";
  double where = 0.0;
  r.member_ratios.push_back(pointwise_fit(which, rho, phi, psi, f, c0, &where));
  finish(r);
  r.detail = "C1 " + format_number(r.fitted) + " attained near x = " + format_number(where) + ", C0 " +
             format_number(c0);
  return r;
}

FitReport verify_pointwise_family(PointwiseKind which, const Kernel& rho, const YoungFunction& phi,
                                  const YoungFunction& psi, const TestFamily& family, double c0, double cap) {
  require_scale(which, rho, phi, psi, family.n);
  FitReport r;
  r.name = which == PointwiseKind::Ir ? "pointwise-ir-family" : "pointwise-mr-family";
  r.cap = cap;
  for (const auto& m : family.members()) r.member_ratios.push_back(pointwise_fit(which, rho, phi, psi, m.f, c0));
  finish(r);
  r.detail = "C1 per member: " + ratio_list(r.member_ratios) + "; stability " + format_number(r.stability);
  return r;
}

std::string OperatorSpec::describe() const {
  switch (kind) {
    case OperatorKind::M:
      return "M";
    case OperatorKind::MRho:
      return "M_rho[" + rho.describe() + "]";
    case OperatorKind::IRho:
      return "I_rho[" + rho.describe() + "]";
    case OperatorKind::Commutator:
      return "[b, I_rho[" + rho.describe() + "]]";
  }
  return "M";
}

FitReport verify_operator_norm_family(const OperatorSpec& op, const YoungFunction& phi, const YoungFunction& psi,
                                      const TestFamily& family, bool weak_target, double cap) {
  const auto members = family.members();
  if (members.empty()) throw std::invalid_argument("empty test family");
  FitReport r;
  r.name = "norm-family " + op.describe();
  r.cap = cap;
  for (const auto& m : members) {
    GridFunction t;
    double scale = 1.0;
    switch (op.kind) {
      case OperatorKind::M:
        t = maximal(maximal_variant::HL{}, m.f);
        break;
      case OperatorKind::MRho:
        t = maximal(maximal_variant::Fractional{op.rho}, m.f);
        break;
      case OperatorKind::IRho:
        t = frac_integral(op.rho, m.f);
        break;
      case OperatorKind::Commutator: {
        if (!m.b) throw std::invalid_argument("commutator family needs b");
        scale = campanato_one(*m.b);
        if (!(scale > 0.0)) throw std::invalid_argument("b has zero Campanato estimate");
        t = commutator(*m.b, op.rho, m.f);
        break;
      }
    }
    const double num = weak_target ? weak_luxemburg_norm(t, psi) : luxemburg_norm(t, psi);
    const double den = luxemburg_norm(m.f, phi);
    r.member_ratios.push_back(num / (scale * den));
  }
  finish(r);
  r.detail = std::string(weak_target ? "weak" : "strong") + " target " + psi.describe() + ", source " +
             phi.describe() + "; ratios " + ratio_list(r.member_ratios) + "; stability " +
             format_number(r.stability) + ", cap " + format_number(cap);
  return r;
}

FitReport verify_good_lambda(const GridFunction& f, const std::vector<double>& gammas,
                             const std::vector<double>& lambdas, const BallFamily& balls, double slack) {
  if (!dyadic_aligned(f.geometry())) throw std::invalid_argument("f is not aligned to the dyadic lattice");
  const GridGeometry eval = f.geometry().refined(2);
  const GridFunction md = maximal(maximal_variant::Dyadic{}, f, eval, balls);
  const GridFunction ms = maximal(maximal_variant::Sharp{}, f, eval, balls);
  const double cell = eval.cell_measure();
  const double dim_factor = f.dim() == 1 ? 2.0 : 4.0;
  FitReport r;
  r.name = "good-lambda";
  r.cap = slack;
  double worst = 0.0;
  for (double gamma : gammas) {
    for (double lambda : lambdas) {
      std::size_t left = 0, right = 0;
      for (std::size_t i = 0; i < md.values().size(); ++i) {
        const double d = md.values()[i];
        if (d > 2.0 * lambda && ms.values()[i] <= gamma * lambda) ++left;
        if (d > lambda) ++right;
      }
      const double lhs = static_cast<double>(left) * cell;
      const double bound = dim_factor * gamma * static_cast<double>(right) * cell;
      double q;
      if (lhs == 0.0) q = 0.0;
      else q = bound > 0.0 ? lhs / bound : kInf;
      r.member_ratios.push_back(q);
      worst = std::max(worst, q);
    }
  }
  r.fitted = worst;
  r.stability = worst;
  r.pass = worst <= slack;
  r.detail = "largest LHS/(2^n gamma RHS) " + format_number(worst) + " over " +
             std::to_string(r.member_ratios.size()) + " pairs, slack factor " + format_number(slack);
  return r;
}

FitReport verify_sharp_pointwise(const GridFunction& b, const Kernel& rho, const WeightDescriptor& psi,
                                 const std::vector<GridFunction>& fs, double eta, double cap) {
  if (!(eta > 1.0)) throw std::invalid_argument("eta must exceed 1");
  if (!psi.almost_increasing_constant()) throw std::invalid_argument("weight is not certified almost increasing");
  const auto kc = check_kernel_conditions(rho, b.dim(), default_kernel_grid());
  if (!kc.integrable.pass || !kc.lipschitz.pass || !kc.almost_decreasing.pass)
    throw std::invalid_argument("kernel hypotheses not certified");
  const double bnorm = campanato_norm(b, psi, 1.0, BallFamily::standard(b.geometry())).value;
  FitReport r;
  r.name = "sharp-pointwise";
  r.cap = cap;
  const maximal_variant::RadialWeight wpsi{[psi, eta](double t) { return std::pow(psi(t), eta); }};
  const maximal_variant::RadialWeight wstar{
      [psi, eta, rho](double t) { return std::pow(rho.rho_star(t) * psi(t), eta); }};
  for (const auto& f : fs) {
    const GridGeometry eval = f.geometry().refined(2);
    const BallFamily balls = BallFamily::standard(eval);
    const GridFunction comm = commutator(b, rho, f, eval);
    const GridFunction lhs = maximal(maximal_variant::Sharp{}, comm, eval, balls);
    const GridFunction itf = frac_integral(rho, f, eval);
    const GridFunction a = maximal(wpsi, itf.map([eta](double v) { return std::pow(std::abs(v), eta); }), eval, balls);
    const GridFunction c = maximal(wstar, f.map([eta](double v) { return std::pow(std::abs(v), eta); }), eval, balls);
    double best = 0.0;
    if (bnorm == 0.0) {
      double scale = 0.0;
      for (std::size_t i = 0; i < itf.values().size(); ++i)
        scale = std::max(scale, std::abs(b.value_at(eval.center_x(i % eval.nx), eval.center_y(i / eval.nx)) *
                                         itf.values()[i]));
      const double top = *std::max_element(lhs.values().begin(), lhs.values().end());
      best = top <= 1e-10 * std::max(scale, 1.0) ? 0.0 : kInf;
    } else {
      for (std::size_t i = 0; i < lhs.values().size(); ++i) {
        const double v = lhs.values()[i];
        if (v == 0.0) continue;
        const double rhs = std::pow(a.values()[i], 1.0 / eta) + std::pow(c.values()[i], 1.0 / eta);
        best = std::max(best, rhs > 0.0 ? v / (bnorm * rhs) : kInf);
      }
    }
    r.member_ratios.push_back(best);
  }
  finish(r);
  r.detail = "Campanato estimate of b " + format_number(bnorm) + ", eta " + format_number(eta) +
             "; C per member " + ratio_list(r.member_ratios) + "; stability " + format_number(r.stability) +
             "; step data stand in for smooth f";
  return r;
}

FitReport verify_dyadic_sharp_norm(const std::vector<GridFunction>& fs, const YoungFunction& phi) {
  if (!check_delta2(phi, default_t_grid()).pass) throw std::invalid_argument("Young function fails Delta2");
  FitReport r;
  r.name = "dyadic-sharp-norm";
  for (const auto& f : fs) {
    const GridGeometry eval = f.geometry().refined(2);
    const BallFamily balls = BallFamily::standard(f.geometry());
    const double top = luxemburg_norm(maximal(maximal_variant::Dyadic{}, f, eval, balls), phi);
    const double bottom = luxemburg_norm(maximal(maximal_variant::Sharp{}, f, eval, balls), phi);
    r.member_ratios.push_back(top == 0.0 ? 0.0 : (bottom > 0.0 ? top / bottom : kInf));
  }
  finish(r);
  r.cap = kInf;
  r.pass = std::isfinite(r.fitted);
  r.detail = "C per member " + ratio_list(r.member_ratios);
  return r;
}

SharpBoundsReport verify_sharp_bounds(const GridFunction& b, const Kernel& rho, const WeightDescriptor& psi,
                                      const YoungFunction& phi, const std::vector<GridFunction>& fs, double eta) {
  return {verify_sharp_pointwise(b, rho, psi, fs, eta), verify_dyadic_sharp_norm(fs, phi)};
}

bool ExampleSuiteReport::ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const ExampleRow& r) { return r.ok(); }) &&
         std::all_of(controls.begin(), controls.end(), [](const ExampleRow& r) { return r.ok(); });
}

namespace {

ScaleInputs inputs(const Kernel& rho, const YoungFunction& phi, const YoungFunction& psi) {
  ScaleInputs in;
  in.rho = rho;
  in.phi = phi;
  in.psi = psi;
  return in;
}

class RowBuilder {
 public:
  RowBuilder(std::string name, std::string description, bool expected) {
    row_.name = std::move(name);
    row_.description = std::move(description);
    row_.expected = expected;
  }
  RowBuilder& condition(ScaleKind kind, const ScaleInputs& in) {
    const auto rep = check_scale_condition(kind, in);
    add(rep.pass, rep.detail);
    return *this;
  }
  RowBuilder& fit(const FitReport& r) {
    add(r.pass, r.name + ": " + r.detail);
    return *this;
  }
  RowBuilder& fact(bool ok, const std::string& what) {
    add(ok, what);
    return *this;
  }
  ExampleRow done() {
    row_.outcome = all_;
    return row_;
  }

 private:
  void add(bool ok, const std::string& text) {
    all_ = all_ && ok;
    row_.checks.push_back(std::string(ok ? "pass" : "fail") + "  " + text);
  }
  ExampleRow row_;
  bool all_ = true;
};

}  // namespace

ExampleSuiteReport run_example_suite(bool with_operators) {
  using Y = YoungFunction;
  const Kernel pow_half = Kernel::power_alpha(0.5);
  const Kernel cut = Kernel::power_exp_cut(0.5);
  const Kernel maxlog = Kernel::max_log(0.5);
  const auto dil = TestFamily::dilated_chi(dyadic_scales(-4, 4), 256);
  ExampleSuiteReport s;

  {
    RowBuilder b("ir-hls-power", "power kernel alpha 1/2, L^1.5 -> L^6", true);
    b.condition(ScaleKind::IrA, inputs(pow_half, Y::power(1.5), Y::power(6.0)));
    if (with_operators)
      b.fit(verify_operator_norm_family({OperatorKind::IRho, pow_half}, Y::power(1.5), Y::power(6.0), dil, false));
    s.rows.push_back(b.done());
  }
  s.rows.push_back(RowBuilder("ir-exp-log", "logarithmic kernel alpha 1/2, exp L -> exp L^2", true)
                       .condition(ScaleKind::IrA, inputs(Kernel::log_kernel(0.5), Y::exp_power(1.0), Y::exp_power(2.0)))
                       .done());
  s.rows.push_back(RowBuilder("ir-cut-lp-cap-lq", "cut-off kernel alpha 1/2, L^1.5 -> L^1.5 cap L^6", true)
                       .condition(ScaleKind::IrA, inputs(cut, Y::power(1.5), Y::max_power(1.5, 6.0)))
                       .done());
  s.rows.push_back(RowBuilder("ir-cut-lp-plus-linf", "cut-off kernel alpha 1/2, (t^1.5-1)+ -> (t^6-1)+", true)
                       .condition(ScaleKind::IrA, inputs(cut, Y::power_minus_one(1.5), Y::power_minus_one(6.0)))
                       .done());
  s.rows.push_back(RowBuilder("mr-power", "power kernel alpha 1/2, L^1.5 -> L^6", true)
                       .condition(ScaleKind::MrA, inputs(pow_half, Y::power(1.5), Y::power(6.0)))
                       .done());
  {
    RowBuilder b("mr-hl-p-eq-q", "constant kernel, L^2 -> L^2", true);
    b.condition(ScaleKind::MrA, inputs(Kernel::power_alpha(0.0), Y::power(2.0), Y::power(2.0)));
    if (with_operators)
      b.fit(verify_operator_norm_family({OperatorKind::M, {}}, Y::power(2.0), Y::power(2.0), dil, true, 1.1));
    s.rows.push_back(b.done());
  }
  s.rows.push_back(RowBuilder("mr-frac-to-linf", "power kernel alpha 1/2, L^2 -> L^inf", true)
                       .condition(ScaleKind::MrA, inputs(pow_half, Y::power(2.0), Y::step_infinity()))
                       .done());
  {
    RowBuilder b("mr-exp-log", "max-log kernel alpha 1/2, exp L -> exp L^2", true);
    b.condition(ScaleKind::MrA, inputs(maxlog, Y::exp_power(1.0), Y::exp_power(2.0)));
    if (with_operators)
      b.fit(verify_operator_norm_family({OperatorKind::MRho, maxlog}, Y::exp_power(1.0), Y::exp_power(2.0), dil,
                                        false));
    s.rows.push_back(b.done());
  }
  {
    RowBuilder b("mr-log-kernel-ir-undefined", "max-log kernel alpha 1/2: I_rho undefined, M_rho bounded", true);
    b.fact(std::isinf(maxlog.rho_star(1.0)), "rho*(1) = " + format_number(maxlog.rho_star(1.0)));
    b.condition(ScaleKind::MrA, inputs(maxlog, Y::exp_power(1.0), Y::exp_power(2.0)));
    if (with_operators)
      b.fit(verify_operator_norm_family({OperatorKind::MRho, maxlog}, Y::exp_power(1.0), Y::exp_power(2.0),
                                        TestFamily::dilated_chi(dyadic_scales(-4, 0), 256, false), false));
    s.rows.push_back(b.done());
  }
  s.rows.push_back(RowBuilder("mr-exp-to-linf", "max-log kernel alpha 1/2, exp L^2 -> L^inf", true)
                       .condition(ScaleKind::MrA, inputs(maxlog, Y::exp_power(2.0), Y::step_infinity()))
                       .done());
  s.rows.push_back(RowBuilder("mr-lp-to-llogl", "max-log kernel alpha 1/2, L^2 -> L^2 (log L)^1", true)
                       .condition(ScaleKind::MrA, inputs(maxlog, Y::power(2.0), Y::power_log(2.0, 1.0)))
                       .done());
  {
    ScaleInputs in = inputs(pow_half, Y::power(1.5), Y::power(6.0));
    in.theta = Y::power(6.0);
    in.weight = WeightDescriptor::one();
    RowBuilder b("comm-bmo-chanillo", "commutator with BMO, power kernel alpha 1/2, L^1.5 -> L^6", true);
    b.condition(ScaleKind::CommIrA, in).condition(ScaleKind::CommMrA, in);
    if (with_operators)
      b.fit(verify_operator_norm_family({OperatorKind::Commutator, pow_half}, Y::power(1.5), Y::power(6.0),
                                        TestFamily::commutator_pair("log-abs", dyadic_scales(-2, 2), 256), false,
                                        3.0));
    s.rows.push_back(b.done());
  }
  {
    ScaleInputs in = inputs(Kernel::power_log(0.25, 0.5), Y::power_log(2.0, 1.0), Y::power_log(1.0 / 0.15, 10.0));
    in.theta = Y::power_log(4.0, 4.0);
    in.weight = WeightDescriptor::power_log_beta(0.1, 0.5);
    s.rows.push_back(RowBuilder("comm-powerlog", "commutator with a log-Lipschitz weight, power-log scales", true)
                         .condition(ScaleKind::CommIrA, in)
                         .condition(ScaleKind::CommMrA, in)
                         .done());
  }

  s.controls.push_back(RowBuilder("ir-hls-alpha-up", "power kernel alpha 0.6 with the alpha 1/2 exponents", false)
                           .condition(ScaleKind::IrA, inputs(Kernel::power_alpha(0.6), Y::power(1.5), Y::power(6.0)))
                           .done());
  s.controls.push_back(RowBuilder("ir-hls-alpha-down", "power kernel alpha 0.4 with the alpha 1/2 exponents", false)
                           .condition(ScaleKind::IrA, inputs(Kernel::power_alpha(0.4), Y::power(1.5), Y::power(6.0)))
                           .done());
  s.controls.push_back(
      RowBuilder("mr-hl-p-ne-q", "constant kernel, L^2 -> L^2.5", false)
          .condition(ScaleKind::MrA, inputs(Kernel::power_alpha(0.0), Y::power(2.0), Y::power(2.5)))
          .done());
  s.controls.push_back(RowBuilder("ir-uncut-lp-cap-lq", "power kernel without cut-off, L^1.5 -> L^1.5 cap L^6", false)
                           .condition(ScaleKind::IrA, inputs(pow_half, Y::power(1.5), Y::max_power(1.5, 6.0)))
                           .done());
  s.controls.push_back(RowBuilder("ir-max-log-kernel", "max-log kernel alpha 1/2 for I_rho", false)
                           .condition(ScaleKind::IrA, inputs(maxlog, Y::exp_power(1.0), Y::exp_power(2.0)))
                           .done());
  if (with_operators)
    s.controls.push_back(
        RowBuilder("m-strong-l1", "M strong type on L^1, shrinking characteristic functions", false)
            .fit(verify_operator_norm_family({OperatorKind::M, {}}, Y::power(1.0), Y::power(1.0),
                                             TestFamily::dilated_chi(dyadic_scales(-6, 0), 1024, false), false))
            .done());
  return s;
}

void write_fit_report(std::ostream& out, const FitReport& r) {
  out << r.name << ": " << (r.pass ? "pass" : "fail") << ", fitted " << format_number(r.fitted) << ", stability "
      << format_number(r.stability) << ", cap " << format_number(r.cap) << '\n'
      << "  " << r.detail << '\n';
}

void write_suite_report(std::ostream& out, const ExampleSuiteReport& report) {
  auto section = [&](const char* title, const std::vector<ExampleRow>& rows) {
    out << title << '\n';
    for (const auto& row : rows) {
      out << (row.ok() ? "ok    " : "WRONG ") << row.name << "  expected " << (row.expected ? "pass" : "fail")
          << ", got " << (row.outcome ? "pass" : "fail") << "  (" << row.description << ")\n";
      for (const auto& c : row.checks) out << "      " << c << '\n';
    }
  };
  section("examples", report.rows);
  section("negative controls", report.controls);
  out << "suite " << (report.ok() ? "ok" : "FAILED") << '\n';
}

}  // namespace orlicz
