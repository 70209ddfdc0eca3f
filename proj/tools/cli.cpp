#include "orlicz/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "orlicz/harness.hpp"
#include "orlicz/numeric.hpp"
#include "orlicz/parse.hpp"

namespace orlicz {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string n = "1";
  std::string grid = "256";
  std::string h = "0.015625";
  std::string tol = "1e-6";
  std::string seed = "1";
  std::string out;
  std::string threads;
};

struct Options {
  Globals g;
  std::string desc;
  std::string t, u, r;
  std::string phi, psi, theta, weight, rho, f, in, b;
  std::string variant = "hl";
  std::string alpha;
  std::string count = "100";
  std::string file;
  bool weak = false;
  bool quick = false;
};

int as_dim(const std::string& s) {
  if (s == "1") return 1;
  if (s == "2") return 2;
  throw ParseError(s, "dimension must be 1 or 2");
}

std::size_t as_count(const std::string& s) {
  const double v = parse_number(s);
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) throw ParseError(s, "expected a positive integer");
  return static_cast<std::size_t>(v);
}

std::uint64_t as_seed(const std::string& s) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ParseError(s, "expected an unsigned 64-bit seed");
  return v;
}

double as_positive(const std::string& s) {
  const double v = parse_number(s);
  if (!(v > 0.0) || !std::isfinite(v)) throw ParseError(s, "expected a positive number");
  return v;
}

GridFunction input_function(const Options& o) {
  if (!o.in.empty() && !o.f.empty()) throw UsageError("give either --in or --f, not both");
  if (!o.in.empty()) return read_grid(o.in);
  if (o.f.empty()) throw UsageError("missing input function (--in or --f)");
  const int n = as_dim(o.g.n);
  const std::size_t cells = as_count(o.g.grid);
  const double h = as_positive(o.g.h);
  const double x0 = -static_cast<double>(cells) * h / 2.0;
  const GridGeometry g =
      n == 1 ? GridGeometry::line(h, x0, cells) : GridGeometry::plane(h, x0, x0, cells, cells);
  return make_builtin(o.f, g);
}

FracIntegralOptions frac_options(const Options& o) {
  FracIntegralOptions fo;
  fo.tol = as_positive(o.g.tol);
  return fo;
}

// Writes through a temporary file so a report is either complete or absent.
void write_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << content;
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
  }
  std::filesystem::rename(tmp, path);
}

int young_cmd(const std::string& action, const Options& o, std::ostream& out) {
  const YoungFunction phi = YoungFunction::parse(o.desc);
  auto need = [](const std::string& v, const char* flag) {
    if (v.empty()) throw UsageError(std::string("missing ") + flag);
    return parse_number(v);
  };
  if (action == "eval") {
    out << format_number(phi.eval(Extended(need(o.t, "--t"))).value()) << '\n';
  } else if (action == "inverse") {
    out << format_number(phi.inverse(Extended(need(o.u, "--u"))).value()) << '\n';
  } else if (action == "complement") {
    out << format_number(complementary(phi)(need(o.t, "--t"))) << '\n';
  } else {
    const auto grid = default_t_grid();
    const auto d2 = check_delta2(phi, grid);
    const auto n2 = check_nabla2(phi, grid, default_k_candidates());
    out << "family " << phi.describe() << '\n'
        << "a " << format_number(phi.a_phi()) << '\n'
        << "b " << format_number(phi.b_phi()) << '\n'
        << "convex " << (phi.is_convex() ? "yes" : "no") << '\n'
        << "delta2 " << (d2.pass ? "pass" : "fail") << " C " << format_number(d2.constant.value()) << '\n'
        << "nabla2 " << (n2.pass ? "pass" : "fail") << " k " << format_number(n2.constant.value()) << '\n';
  }
  return 0;
}

int kernel_cmd(const std::string& action, const Options& o, std::ostream& out) {
  const Kernel k = Kernel::parse(o.desc);
  if (action == "eval" || action == "rhostar") {
    if (o.r.empty()) throw UsageError("missing --r");
    const double r = as_positive(o.r);
    out << format_number(action == "eval" ? k(r) : k.rho_star(r)) << '\n';
    return 0;
  }
  const auto c = check_kernel_conditions(k, as_dim(o.g.n), default_kernel_grid());
  bool all = true;
  for (const CheckReport* rep : {&c.integrable, &c.sup_doubling, &c.lipschitz, &c.almost_decreasing, &c.propagation,
                                 &c.rho_star_doubling}) {
    all = all && rep->pass;
    out << rep->name << ' ' << (rep->pass ? "pass" : "fail") << " constant " << format_number(rep->constant.value())
        << '\n';
  }
  out << "epsilon " << format_number(c.epsilon) << '\n';
  return all ? 0 : 1;
}

int norm_cmd(const Options& o, std::ostream& out) {
  if (o.phi.empty()) throw UsageError("missing --phi");
  const YoungFunction phi = YoungFunction::parse(o.phi);
  const GridFunction f = input_function(o);
  if (!o.g.out.empty()) write_grid(o.g.out, f);
  out << "luxemburg " << format_number(luxemburg_norm(f, phi)) << '\n';
  if (o.weak) out << "weak " << format_number(weak_luxemburg_norm(f, phi)) << '\n';
  return 0;
}

MaximalVariant parse_variant(const Options& o) {
  if (o.variant == "hl") return maximal_variant::HL{};
  if (o.variant == "sharp") return maximal_variant::Sharp{};
  if (o.variant == "dyadic") return maximal_variant::Dyadic{};
  if (o.variant == "kernel") {
    if (o.rho.empty()) throw UsageError("variant kernel needs --rho");
    return maximal_variant::Fractional{Kernel::parse(o.rho)};
  }
  if (o.variant == "power") {
    if (o.alpha.empty()) throw UsageError("variant power needs --alpha");
    return maximal_variant::FractionalPower{parse_number(o.alpha)};
  }
  throw ParseError(o.variant, "unknown maximal variant");
}

int op_cmd(const std::string& action, const Options& o, std::ostream& out) {
  const GridFunction f = input_function(o);
  GridFunction field;
  if (action == "maximal") {
    field = maximal(parse_variant(o), f);
  } else {
    if (o.rho.empty()) throw UsageError("missing --rho");
    const Kernel k = Kernel::parse(o.rho);
    if (action == "integral") {
      field = frac_integral(k, f, frac_options(o));
    } else {
      if (o.b.empty()) throw UsageError("missing --b");
      field = commutator(make_builtin(o.b, f.geometry()), k, f, frac_options(o));
    }
  }
  std::ostringstream csv;
  write_csv(csv, field);
  if (o.g.out.empty()) {
    out << csv.str();
  } else {
    write_atomically(o.g.out, csv.str());
    double top = 0.0;
    for (double v : field.values()) top = std::max(top, std::abs(v));
    out << "points " << field.values().size() << '\n' << "max " << format_number(top) << '\n';
  }
  return 0;
}

int check_cmd(const std::string& kind_text, const Options& o, std::ostream& out) {
  const ScaleKind kind = parse_scale_kind(kind_text);
  if (o.rho.empty() || o.phi.empty()) throw UsageError("check needs --rho and --phi");
  ScaleInputs in;
  in.rho = Kernel::parse(o.rho);
  in.phi = YoungFunction::parse(o.phi);
  if (!o.psi.empty()) in.psi = YoungFunction::parse(o.psi);
  if (!o.theta.empty()) in.theta = YoungFunction::parse(o.theta);
  if (!o.weight.empty()) in.weight = WeightDescriptor::parse(o.weight);
  in.n = as_dim(o.g.n);
  const auto rep = check_scale_condition(kind, in);
  out << "condition " << to_string(kind) << '\n'
      << "verdict " << (rep.pass ? "pass" : "fail") << '\n'
      << "A " << format_number(rep.fitted_A.value()) << '\n'
      << "flatness " << format_number(rep.flatness) << '\n'
      << "end_factor " << format_number(rep.end_factor) << '\n'
      << "detail " << rep.detail << '\n';
  if (!o.g.out.empty()) {
    std::ostringstream csv;
    write_profile_csv(csv, rep);
    write_atomically(o.g.out, csv.str());
  }
  return rep.pass ? 0 : 1;
}

// Config files: `[name]` sections of `key = value` lines; `#` starts a comment.
using Section = std::pair<std::string, std::map<std::string, std::string>>;

std::vector<Section> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::vector<Section> out;
  std::string line;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line, "bad section header");
      out.push_back({trim(line.substr(1, line.size() - 2)), {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || out.empty()) throw ParseError(line, "expected key = value inside a section");
    out.back().second[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::vector<double> parse_scales(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw ParseError(text, "expected scales lo..hi");
  const double lo = parse_number(text.substr(0, dots));
  const double hi = parse_number(text.substr(dots + 2));
  if (lo != std::floor(lo) || hi != std::floor(hi) || lo > hi || std::abs(lo) > 60 || std::abs(hi) > 60)
    throw ParseError(text, "expected integer exponents lo..hi");
  return dyadic_scales(static_cast<int>(lo), static_cast<int>(hi));
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "yes") return true;
  if (text == "false" || text == "no") return false;
  throw ParseError(text, "expected true or false");
}

struct ConfigOutcome {
  bool pass = false;
  std::string detail;
};

ConfigOutcome run_section(const std::map<std::string, std::string>& kv) {
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(key, "missing key");
    return it->second;
  };
  auto opt = [&](const std::string& key, const std::string& fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };
  const std::string type = get("type");
  if (type == "scale") {
    ScaleInputs in;
    in.rho = Kernel::parse(get("rho"));
    in.phi = YoungFunction::parse(get("phi"));
    if (kv.count("psi")) in.psi = YoungFunction::parse(get("psi"));
    if (kv.count("theta")) in.theta = YoungFunction::parse(get("theta"));
    if (kv.count("weight")) in.weight = WeightDescriptor::parse(get("weight"));
    in.n = as_dim(opt("n", "1"));
    const auto rep = check_scale_condition(parse_scale_kind(get("kind")), in);
    return {rep.pass, rep.detail};
  }
  TestFamily family;
  const std::string fam = opt("family", "dilated-chi");
  const auto scales = parse_scales(get("scales"));
  const std::size_t cells = as_count(opt("cells", "256"));
  if (fam == "dilated-chi") family = TestFamily::dilated_chi(scales, cells, true, as_dim(opt("n", "1")));
  else if (fam == "fixed-chi") family = TestFamily::dilated_chi(scales, cells, false, as_dim(opt("n", "1")));
  else if (fam == "commutator-pair") family = TestFamily::commutator_pair(get("b"), scales, cells);
  else throw ParseError(fam, "unknown family");
  const double cap = as_positive(opt("cap", "2"));
  const YoungFunction phi = YoungFunction::parse(get("phi"));
  const YoungFunction psi = YoungFunction::parse(get("psi"));
  if (type == "norm-family") {
    OperatorSpec op;
    const std::string name = get("op");
    if (name == "m") op.kind = OperatorKind::M;
    else if (name == "mrho") op.kind = OperatorKind::MRho;
    else if (name == "irho") op.kind = OperatorKind::IRho;
    else if (name == "commutator") op.kind = OperatorKind::Commutator;
    else throw ParseError(name, "unknown operator");
    if (op.kind != OperatorKind::M) op.rho = Kernel::parse(get("rho"));
    const auto r = verify_operator_norm_family(op, phi, psi, family, parse_bool(opt("weak", "false")), cap);
    return {r.pass, r.detail};
  }
  if (type == "pointwise") {
    const std::string which = get("which");
    if (which != "ir" && which != "mr") throw ParseError(which, "expected ir or mr");
    const auto r = verify_pointwise_family(which == "ir" ? PointwiseKind::Ir : PointwiseKind::Mr,
                                           Kernel::parse(get("rho")), phi, psi, family,
                                           as_positive(opt("c0", "1")), cap);
    return {r.pass, r.detail};
  }
  throw ParseError(type, "unknown section type");
}

int suite_cmd(const std::string& action, const Options& o, std::ostream& out) {
  std::ostringstream report;
  bool ok = true;
  if (action == "examples") {
    const auto s = run_example_suite(!o.quick);
    write_suite_report(report, s);
    ok = s.ok();
  } else if (action == "good-lambda") {
    const auto members = TestFamily::random_step(as_seed(o.g.seed), as_count(o.count)).members();
    double worst = 0.0;
    std::size_t failures = 0;
    for (const auto& m : members) {
      std::vector<double> lambdas;
      for (int j = 0; j < 20; ++j) lambdas.push_back(m.f.max_abs() * std::exp2(-j / 4.0));
      const auto r = verify_good_lambda(m.f, {0.0625, 0.015625}, lambdas, BallFamily::standard(m.f.geometry()));
      worst = std::max(worst, r.fitted);
      if (!r.pass) ++failures;
    }
    ok = failures == 0;
    report << "good-lambda functions " << members.size() << " pairs " << 40 * members.size() << " failures "
           << failures << " largest ratio " << format_number(worst) << " slack 2\n";
  } else {
    if (o.file.empty()) throw UsageError("suite config needs a file");
    const auto sections = read_config(o.file);
    for (const auto& [name, kv] : sections) {
      const auto it = kv.find("expect");
      const bool expect = it == kv.end() ? true : (it->second == "pass" ? true : it->second == "fail" ? false
                                                   : throw ParseError(it->second, "expected pass or fail"));
      const ConfigOutcome r = run_section(kv);
      const bool matched = r.pass == expect;
      ok = ok && matched;
      report << (matched ? "ok    " : "WRONG ") << name << "  expected " << (expect ? "pass" : "fail") << ", got "
             << (r.pass ? "pass" : "fail") << "  " << r.detail << '\n';
    }
    report << "suite " << (ok ? "ok" : "FAILED") << '\n';
  }
  if (!o.g.out.empty()) write_atomically(o.g.out, report.str());
  out << report.str();
  return ok ? 0 : 1;
}

void add_globals(CLI::App* app, Globals& g) {
  app->add_option("--n", g.n, "dimension (1 or 2)");
  app->add_option("--grid", g.grid, "cells per axis");
  app->add_option("--h", g.h, "cell width");
  app->add_option("--tol", g.tol, "relative tolerance");
  app->add_option("--seed", g.seed, "random seed");
  app->add_option("--out", g.out, "output path");
  app->add_option("--threads", g.threads, "worker cap");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Orlicz-space operator toolkit"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  add_globals(&app, o.g);

  std::string action;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    CLI::App* s = parent->add_subcommand(name, help);
    s->fallthrough();
    s->callback([&action, name] { action = name; });
    return s;
  };

  CLI::App* young = app.add_subcommand("young", "Young functions")->fallthrough();
  young->require_subcommand(1);
  for (const char* name : {"eval", "inverse", "complement", "classify"}) {
    CLI::App* s = leaf(young, name, "");
    s->add_option("descriptor", o.desc)->required();
    s->add_option("--t", o.t);
    s->add_option("--u", o.u);
  }
  CLI::App* kernel = app.add_subcommand("kernel", "kernels")->fallthrough();
  kernel->require_subcommand(1);
  for (const char* name : {"eval", "rhostar", "check"}) {
    CLI::App* s = leaf(kernel, name, "");
    s->add_option("descriptor", o.desc)->required();
    s->add_option("--r", o.r);
  }
  CLI::App* norm = app.add_subcommand("norm", "Luxemburg norms of a grid function")->fallthrough();
  norm->add_option("--phi", o.phi);
  norm->add_option("--f", o.f);
  norm->add_option("--in", o.in);
  norm->add_flag("--weak", o.weak);
  CLI::App* op = app.add_subcommand("op", "operator fields")->fallthrough();
  op->require_subcommand(1);
  for (const char* name : {"maximal", "integral", "commutator"}) {
    CLI::App* s = leaf(op, name, "");
    s->add_option("--f", o.f);
    s->add_option("--in", o.in);
    s->add_option("--rho", o.rho);
    s->add_option("--b", o.b);
    s->add_option("--variant", o.variant);
    s->add_option("--alpha", o.alpha);
  }
  std::string kind;
  CLI::App* check = app.add_subcommand("check", "scale conditions")->fallthrough();
  check->add_option("kind", kind)->required();
  for (auto [flag, target] : std::initializer_list<std::pair<const char*, std::string*>>{
           {"--rho", &o.rho}, {"--phi", &o.phi}, {"--psi", &o.psi}, {"--theta", &o.theta}, {"--weight", &o.weight}})
    check->add_option(flag, *target);
  CLI::App* suite = app.add_subcommand("suite", "property suites")->fallthrough();
  suite->require_subcommand(1);
  leaf(suite, "examples", "")->add_flag("--quick", o.quick);
  leaf(suite, "good-lambda", "")->add_option("--count", o.count);
  leaf(suite, "config", "")->add_option("file", o.file)->required();

  if (!args.empty() && args.front().rfind("-", 0) != 0) {
    const auto& subs = {"young", "kernel", "norm", "op", "check", "suite"};
    if (std::find(subs.begin(), subs.end(), args.front()) == subs.end()) {
      err << "error: unknown subcommand: '" << args.front() << "'\n";
      return 2;
    }
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    msg.erase(std::remove(msg.begin(), msg.end(), '\n'), msg.end());
    err << "error: " << msg << '\n';
    return 2;
  }

  try {
    if (!o.g.threads.empty()) set_thread_count(static_cast<unsigned>(as_count(o.g.threads)));
    CLI::App* chosen = app.get_subcommands().front();
    const std::string cmd = chosen->get_name();
    if (cmd == "young") return young_cmd(action, o, out);
    if (cmd == "kernel") return kernel_cmd(action, o, out);
    if (cmd == "norm") return norm_cmd(o, out);
    if (cmd == "op") return op_cmd(action, o, out);
    if (cmd == "check") return check_cmd(kind, o, out);
    return suite_cmd(action, o, out);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    msg.erase(std::remove(msg.begin(), msg.end(), '\n'), msg.end());
    err << "error: " << msg << '\n';
    return 2;
  }
}

}  // namespace orlicz
