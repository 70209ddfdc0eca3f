#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "orlicz/harness.hpp"

using namespace orlicz;

namespace {

// 1D dyadic maximal function at x by direct enumeration of the dyadic intervals [k 2^j, (k+1) 2^j).
double brute_dyadic(const GridFunction& f, double x) {
  const auto& g = f.geometry();
  double best = std::abs(f.value_at(x));
  for (int j = 0; j <= 12; ++j) {
    const double side = g.h * std::ldexp(1.0, j);
    const double a = std::floor(x / side) * side;
    double sum = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double c = g.center_x(i);
      if (c >= a && c < a + side) sum += std::abs(f.value(i)) * g.h;
    }
    best = std::max(best, sum / side);
  }
  return best;
}

}  // namespace

TEST_CASE("test families") {
  SUBCASE("dilated characteristic functions") {
    const auto members = TestFamily::dilated_chi(dyadic_scales(-3, 3), 256).members();
    REQUIRE(members.size() == 7);
    for (const auto& m : members) {
      CHECK(m.f.integral() == m.parameter);
      CHECK(m.f.geometry().h == 8.0 * m.parameter / 256);
    }
    const auto fixed = TestFamily::dilated_chi({0.25, 1.0}, 256, false).members();
    CHECK(fixed[0].f.geometry() == fixed[1].f.geometry());
    CHECK(fixed[0].f.integral() == 0.25);
    CHECK_THROWS_AS((void)TestFamily::dilated_chi({1e-3, 1.0}, 256, false).members(), std::invalid_argument);
    const auto plane = TestFamily::dilated_chi({0.5}, 64, true, 2).members();
    CHECK(plane[0].f.integral() == 0.25);
  }
  SUBCASE("random steps are reproducible and dyadic") {
    const auto a = TestFamily::random_step(5, 20).members();
    const auto b = TestFamily::random_step(5, 20).members();
    REQUIRE(a.size() == 20);
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].f == b[k].f);
      const auto& v = a[k].f.values();
      for (std::size_t i = 32; i < v.size(); ++i) CHECK(v[i] == 0.0);
      for (std::size_t i = 0; i < 32; ++i) CHECK(std::abs(v[i]) <= 1.0);
    }
    CHECK(!(TestFamily::random_step(6, 1).members()[0].f == a[0].f));
  }
  SUBCASE("translated bumps") {
    const auto m = TestFamily::translated_bump({-1.0, 2.0}, 512).members();
    CHECK(m[0].f.integral() == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(m[1].f.value_at(2.0 + 1e-3) == doctest::Approx(1.0).epsilon(1e-2));
  }
  SUBCASE("normalization") {
    auto t = TestFamily::dilated_chi({0.5, 2.0}, 64);
    t.normalize = YoungFunction::power(2.0);
    for (const auto& m : t.members())
      CHECK(luxemburg_norm(m.f, YoungFunction::power(2.0)) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("commutator pairs") {
    const auto m = TestFamily::commutator_pair("log-abs", {0.5, 1.0}, 128).members();
    REQUIRE(m[0].b);
    CHECK(m[0].b->value_at(0.75) == doctest::Approx(std::log(0.75)).epsilon(0.05));
  }
}

TEST_CASE("pointwise domination") {
  const GridFunction chi = TestFamily::dilated_chi({1.0}, 512).members()[0].f;
  SUBCASE("identical fields") {
    const auto r = verify_pointwise_domination(PointwiseKind::Mr, Kernel(), YoungFunction::power(2.0),
                                               YoungFunction::power(2.0), chi, 1.0);
    CHECK(r.pass);
    CHECK(r.fitted == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("power triple is stable under dilation") {
    const auto r = verify_pointwise_family(PointwiseKind::Ir, Kernel::power_alpha(0.5), YoungFunction::power(1.5),
                                           YoungFunction::power(6.0),
                                           TestFamily::dilated_chi(dyadic_scales(-2, 2), 512), 1.0);
    CHECK(r.pass);
    CHECK(r.member_ratios.size() == 5);
    CHECK(r.stability <= 2.0);
    CHECK(std::isfinite(r.fitted));
  }
  SUBCASE("the fitted constant dominates at every point") {
    const Kernel rho = Kernel::power_exp_cut(0.5);
    const auto phi = YoungFunction::power(2.0);
    const auto psi = YoungFunction::power(2.0);
    const GridGeometry g = GridGeometry::line(1.0 / 64, -2.0, 256);
    const GridFunction ball = make_builtin("chi:a=-0.5,b=0.5", g);
    const auto r = verify_pointwise_domination(PointwiseKind::Mr, rho, phi, psi, ball, 1.0);
    REQUIRE(r.pass);
    const double norm = luxemburg_norm(ball, phi);
    const GridGeometry eval = g.refined(2);
    const BallFamily balls = BallFamily::standard(g);
    const GridFunction t = maximal(maximal_variant::Fractional{rho}, ball, eval, balls);
    const GridFunction m = maximal(maximal_variant::HL{}, ball, eval, balls);
    for (std::size_t i = 0; i < t.values().size(); ++i)
      CHECK(psi(t.values()[i] / (r.fitted * norm)) <= phi(m.values()[i] / norm) * (1 + 1e-12));
  }
  SUBCASE("invariants") {
    const Kernel rho = Kernel::power_alpha(0.5);
    const auto phi = YoungFunction::power(1.5);
    const auto psi = YoungFunction::power(6.0);
    const double base = verify_pointwise_domination(PointwiseKind::Ir, rho, phi, psi, chi, 1.0).fitted;
    CHECK(verify_pointwise_domination(PointwiseKind::Ir, rho, phi, psi, chi.scaled(2.0), 1.0).fitted == base);
    // Φ(Mf/(C0‖f‖)) shrinks as C0 grows, so the fitted C1 never decreases with C0.
    double prev = 0.0;
    for (double c0 : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const double c1 = verify_pointwise_domination(PointwiseKind::Ir, rho, phi, psi, chi, c0).fitted;
      CHECK(c1 >= prev);
      prev = c1;
    }
  }
  SUBCASE("uncertified scale condition") {
    CHECK_THROWS_AS((void)verify_pointwise_domination(PointwiseKind::Ir, Kernel::power_alpha(0.7),
                                                      YoungFunction::power(1.5), YoungFunction::power(6.0), chi, 1.0),
                    std::invalid_argument);
  }
}

TEST_CASE("operator norm families") {
  SUBCASE("maximal operator, weak L2") {
    const auto family = TestFamily::dilated_chi(dyadic_scales(-8, 8), 256);
    for (const auto& m : family.members())
      CHECK(luxemburg_norm(m.f, YoungFunction::power(2.0)) ==
            doctest::Approx(exact_char_norm(m.parameter, YoungFunction::power(2.0))).epsilon(1e-9));
    const auto r = verify_operator_norm_family({OperatorKind::M, {}}, YoungFunction::power(2.0),
                                               YoungFunction::power(2.0), family, true, 1.1);
    CHECK(r.pass);
    CHECK(r.stability <= 1.1);
  }
  SUBCASE("maximal operator with a logarithmic kernel on exponential classes") {
    const auto r = verify_operator_norm_family({OperatorKind::MRho, Kernel::max_log(0.5)},
                                               YoungFunction::exp_power(1.0), YoungFunction::exp_power(2.0),
                                               TestFamily::dilated_chi(dyadic_scales(-4, 4), 256), false);
    CHECK(r.pass);
  }
  SUBCASE("commutator with log|x|") {
    const auto r = verify_operator_norm_family({OperatorKind::Commutator, Kernel::power_alpha(0.5)},
                                               YoungFunction::power(1.5), YoungFunction::power(6.0),
                                               TestFamily::commutator_pair("log-abs", dyadic_scales(-2, 2), 256),
                                               false, 3.0);
    CHECK(r.pass);
    CHECK(r.stability <= 3.0);
    CHECK_THROWS_AS((void)verify_operator_norm_family({OperatorKind::Commutator, Kernel::power_alpha(0.5)},
                                                      YoungFunction::power(1.5), YoungFunction::power(6.0),
                                                      TestFamily::commutator_pair("const:c=2", {1.0}, 64), false),
                    std::invalid_argument);
  }
  SUBCASE("strong type fails on L1") {
    const auto r = verify_operator_norm_family({OperatorKind::M, {}}, YoungFunction::power(1.0),
                                               YoungFunction::power(1.0),
                                               TestFamily::dilated_chi(dyadic_scales(-6, 0), 1024, false), false);
    CHECK(!r.pass);
    // The ratios grow as the support shrinks.
    for (std::size_t i = 1; i < r.member_ratios.size(); ++i) CHECK(r.member_ratios[i] < r.member_ratios[i - 1]);
  }
  SUBCASE("normalization does not change the ratios") {
    auto family = TestFamily::dilated_chi({0.5, 1.0, 2.0}, 128);
    const auto plain = verify_operator_norm_family({OperatorKind::IRho, Kernel::power_alpha(0.5)},
                                                   YoungFunction::power(1.5), YoungFunction::power(6.0), family,
                                                   false);
    family.normalize = YoungFunction::power(1.5);
    const auto unit = verify_operator_norm_family({OperatorKind::IRho, Kernel::power_alpha(0.5)},
                                                  YoungFunction::power(1.5), YoungFunction::power(6.0), family, false);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(unit.member_ratios[i] == doctest::Approx(plain.member_ratios[i]).epsilon(1e-9));
  }
}

TEST_CASE("good lambda") {
  const GridGeometry g = GridGeometry::line(1.0 / 32, 0.0, 1024);
  const BallFamily balls = BallFamily::standard(g);
  const std::vector<double> gammas = {1.0 / 16, 1.0 / 64};
  SUBCASE("constant data") {
    const GridFunction c = GridFunction::sample(g, [](double, double) { return 0.5; });
    const auto r = verify_good_lambda(c, gammas, {0.5, 1.0, 2.0}, balls);
    CHECK(r.pass);
    CHECK(r.fitted == 0.0);
  }
  SUBCASE("single spike") {
    std::vector<double> v(g.size(), 0.0);
    v[0] = g.h;
    const GridFunction spike(g, v);
    std::vector<double> lambdas;
    for (int j = 0; j < 20; ++j) lambdas.push_back(g.h * std::ldexp(1.0, -j) * 0.9);
    const auto r = verify_good_lambda(spike, gammas, lambdas, balls);
    CHECK(r.pass);
    CHECK(r.member_ratios.size() == 40);
  }
  SUBCASE("random dyadic steps") {
    double largest = 0.0;
    for (const auto& m : TestFamily::random_step(11, 12).members()) {
      // The dyadic maximal function agrees with direct enumeration at every cell center.
      const GridFunction md = maximal(maximal_variant::Dyadic{}, m.f, g, balls);
      for (std::size_t i = 0; i < 64; ++i) CHECK(md.value(i) == doctest::Approx(brute_dyadic(m.f, g.center_x(i))));
      const double top = m.f.max_abs();
      std::vector<double> lambdas;
      for (int j = 0; j < 20; ++j) lambdas.push_back(top * std::exp2(-j / 4.0));
      const auto r = verify_good_lambda(m.f, gammas, lambdas, balls);
      INFO(r.detail);
      CHECK(r.pass);
      // Larger γ makes the left set nonempty; the bound holds without slack.
      const auto wide = verify_good_lambda(m.f, {0.25, 0.5, 1.0}, lambdas, balls, 1.0);
      CHECK(wide.pass);
      largest = std::max(largest, wide.fitted);
    }
    CHECK(largest > 0.0);
  }
  SUBCASE("misaligned data") {
    const GridFunction f = GridFunction::sample(GridGeometry::line(0.1, 0.0, 64), [](double, double) { return 1.0; });
    CHECK_THROWS_AS((void)verify_good_lambda(f, gammas, {0.5}, balls), std::invalid_argument);
    const GridFunction s = GridFunction::sample(GridGeometry::line(0.125, 0.0625, 64), [](double, double) { return 1.0; });
    CHECK_THROWS_AS((void)verify_good_lambda(s, gammas, {0.5}, balls), std::invalid_argument);
  }
}

TEST_CASE("sharp maximal bounds") {
  const Kernel rho = Kernel::power_alpha(0.5);
  const auto one = WeightDescriptor::one().certified();
  SUBCASE("constant b") {
    const auto family = TestFamily::translated_bump({0.0, 1.0}, 256).members();
    const GridFunction b = GridFunction::sample(family[0].f.geometry(), [](double, double) { return 3.0; });
    const auto r = verify_sharp_pointwise(b, rho, one, {family[0].f, family[1].f});
    CHECK(r.pass);
    CHECK(r.fitted == 0.0);
  }
  SUBCASE("logarithmic b across translations") {
    const auto family = TestFamily::translated_bump({-1.0, 0.5, 2.0}, 256).members();
    const GridFunction b = make_builtin("log-abs", family[0].f.geometry());
    std::vector<GridFunction> fs;
    for (const auto& m : family) fs.push_back(m.f);
    const auto r = verify_sharp_pointwise(b, rho, one, fs, 2.0);
    INFO(r.detail);
    CHECK(r.pass);
    CHECK(r.stability <= 2.0);
  }
  SUBCASE("dyadic and sharp norms") {
    const GridGeometry g = GridGeometry::line(1.0 / 16, -2.0, 96);
    const GridFunction f = GridFunction::sample(g, [](double x, double) {
      if (x >= 0.0 && x < 1.0) return 1.0;
      if (x >= 1.0 && x < 2.0) return -1.0;
      return 0.0;
    });
    const auto r = verify_dyadic_sharp_norm({f}, YoungFunction::power(1.0));
    CHECK(r.pass);
    CHECK(r.fitted > 0.0);
    CHECK(std::isfinite(r.fitted));
    CHECK_THROWS_AS((void)verify_dyadic_sharp_norm({f}, YoungFunction::exp_power(1.0)), std::invalid_argument);
    const auto both = verify_sharp_bounds(make_builtin("log-abs", g), rho, one, YoungFunction::power(2.0), {f});
    CHECK(both.pointwise.pass);
    CHECK(both.dyadic_norm.pass);
  }
  SUBCASE("hypotheses") {
    const auto family = TestFamily::translated_bump({0.0}, 64).members();
    const GridFunction b = make_builtin("log-abs", family[0].f.geometry());
    CHECK_THROWS_AS((void)verify_sharp_pointwise(b, rho, WeightDescriptor::one(), {family[0].f}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)verify_sharp_pointwise(b, Kernel::max_log(0.5), one, {family[0].f}), std::invalid_argument);
    CHECK_THROWS_AS((void)verify_sharp_pointwise(b, rho, one, {family[0].f}, 1.0), std::invalid_argument);
  }
}

TEST_CASE("example suite") {
  const auto s = run_example_suite(true);
  CHECK(s.rows.size() == 13);
  CHECK(s.controls.size() >= 5);
  for (const auto& row : s.rows) {
    INFO(row.name);
    CHECK(row.expected);
    CHECK(row.ok());
  }
  for (const auto& row : s.controls) {
    INFO(row.name);
    CHECK(!row.expected);
    CHECK(row.ok());
  }
  CHECK(s.ok());
  std::ostringstream os;
  write_suite_report(os, s);
  CHECK(os.str().find("suite ok") != std::string::npos);
  CHECK(os.str().find("mr-log-kernel-ir-undefined") != std::string::npos);
  const auto quick = run_example_suite(false);
  CHECK(quick.ok());
}
