#include <cmath>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "orlicz/kernels.hpp"
#include "orlicz/numeric.hpp"
#include "orlicz/parse.hpp"

using namespace orlicz;

namespace {

const double kE = std::exp(1.0);

// Composite Simpson for ∫_a^b ρ(t)/t dt in s = log t, split at 1/e, e and any extra cuts.
double simpson_window(const Kernel& k, double a, double b, std::vector<double> cuts = {}) {
  cuts.push_back(1.0 / kE);
  cuts.push_back(kE);
  std::vector<double> pts{a};
  for (double c : cuts) {
    if (c > a && c < b) pts.push_back(c);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = std::log(pts[i]);
    const double hi = std::log(pts[i + 1]);
    const int m = 20000;
    const double h = (hi - lo) / m;
    double s = k(std::exp(lo)) + k(std::exp(hi) * (1 - 1e-15));
    for (int j = 1; j < m; ++j) s += (j % 2 ? 4.0 : 2.0) * k(std::exp(lo + j * h));
    total += s * h / 3.0;
  }
  return total;
}

Kernel jump_kernel() {
  std::vector<double> r;
  std::vector<double> v;
  for (int j = -40; j <= 0; ++j) {
    r.push_back(std::exp2(j / 4.0));
    v.push_back(std::sqrt(r.back()));
  }
  for (int j = 0; j <= 40; ++j) {
    r.push_back(std::exp2(j / 4.0));
    v.push_back(10.0 * std::sqrt(r.back()));
  }
  return Kernel::tabulated(r, v);
}

}  // namespace

TEST_CASE("kernel evaluation examples") {
  CHECK(Kernel::power_alpha(0.5)(4.0) == 2.0);
  CHECK(Kernel::log_kernel(1)(std::exp(-10.0)) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(Kernel::max_log(1)(std::exp(10.0)) == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(Kernel::power_alpha(0)(123.0) == 1.0);
  CHECK(Kernel()(0.3) == 1.0);
  CHECK_THROWS_AS((void)Kernel::power_alpha(0.5)(0.0), std::domain_error);
  CHECK_THROWS_AS((void)Kernel::power_alpha(0.5)(-1.0), std::domain_error);
  CHECK_THROWS_AS(Kernel::power_alpha(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::log_kernel(0), std::invalid_argument);
}

TEST_CASE("bridges are continuous and positive") {
  for (const auto& k : {Kernel::log_kernel(0.5), Kernel::max_log(1.5), Kernel::power_log(0.5, 1),
                        Kernel::power_exp_cut(0.5)}) {
    INFO(k.describe());
    for (double b : {1.0 / kE, kE}) {
      CHECK(k(b * (1 - 1e-12)) == doctest::Approx(k(b * (1 + 1e-12))).epsilon(1e-9));
    }
    for (double r : dyadic_grid(-40, 9, 2)) CHECK(k(r) > 0.0);
  }
  CHECK(Kernel::power_log(0.5, 1)(1.0) == 1.0);
  CHECK(Kernel::power_exp_cut(0.5)(kE) == doctest::Approx(std::exp(-kE)));
}

TEST_CASE("descriptor grammar for kernels") {
  CHECK(Kernel::parse("power:alpha=0.5")(4.0) == 2.0);
  CHECK(Kernel::parse("logker:alpha=1").family() == KernelFamily::LogKernel);
  CHECK(Kernel::parse("maxlog:alpha=1").family() == KernelFamily::MaxLogKernel);
  CHECK(Kernel::parse("powerlog:alpha=0.5,alpha1=1").alpha1() == 1.0);
  CHECK(Kernel::parse("powerexp:alpha=0.5").family() == KernelFamily::PowerExpCut);
  CHECK_THROWS_AS(Kernel::parse("gauss:alpha=1"), ParseError);
  CHECK_THROWS_AS(Kernel::parse("power:beta=1"), ParseError);
  const std::string path = "kernel_table_fixture.txt";
  {
    std::ofstream out(path);
    out << "0.5 1\n1 2\n1 20\n2 40\n";
  }
  const auto k = Kernel::parse("table:" + path);
  CHECK(k(1.0) == 20.0);
  CHECK(k(0.999) < 2.0);
}

TEST_CASE("rho star examples") {
  CHECK(Kernel::power_alpha(0.5).rho_star(1.0) == 2.0);
  CHECK(std::isinf(Kernel::max_log(0.5).rho_star(1.0)));
  CHECK(std::isinf(Kernel::max_log(0.5).rho_star(1e-9)));
  CHECK(std::isinf(Kernel::max_log(1.0).rho_star(3.0)));
  CHECK(std::isinf(Kernel::power_alpha(0).rho_star(1.0)));
  const double r = std::exp(-20.0);
  const double ratio = Kernel::log_kernel(1).rho_star(r) / (1.0 / std::log(1.0 / r));
  CHECK(ratio >= 0.5);
  CHECK(ratio <= 2.0);
  CHECK_FALSE(Kernel::max_log(0.5).integrable_at_zero());
  CHECK(Kernel::max_log(1.5).integrable_at_zero());
}

TEST_CASE("rho star closed forms match Simpson windows") {
  const std::vector<Kernel> ks = {Kernel::power_alpha(0.5), Kernel::power_alpha(1.7), Kernel::log_kernel(0.5),
                                  Kernel::log_kernel(2), Kernel::max_log(1.5), Kernel::power_log(0.5, 1),
                                  Kernel::power_log(0.25, -0.5), Kernel::power_exp_cut(0.5),
                                  Kernel::power_exp_cut(3.0)};
  const double r0 = std::exp(-6.0);
  for (const auto& k : ks) {
    for (double r : {0.05, 0.5, 1.0, 2.0, 5.0, 40.0}) {
      INFO(k.describe() << " r=" << r);
      const double want = simpson_window(k, r0, r);
      CHECK(k.rho_star(r) - k.rho_star(r0) == doctest::Approx(want).epsilon(1e-8));
    }
  }
}

TEST_CASE("rho star small-r pieces") {
  // ∫_0^r t^{α-1} dt for the power pieces.
  CHECK(Kernel::power_exp_cut(0.5).rho_star(0.01) == doctest::Approx(std::sqrt(0.01) / 0.5));
  // ∫_L^∞ u^{-α-1} du = L^{-α}/α.
  CHECK(Kernel::log_kernel(2).rho_star(std::exp(-3.0)) == doctest::Approx(1.0 / 18.0));
  CHECK(Kernel::max_log(3).rho_star(std::exp(-2.0)) == doctest::Approx(0.125));
  // α1 = 0 reduces the power-log kernel to r^α/α below 1/e.
  CHECK(Kernel::power_log(0.5, 0).rho_star(0.1) == doctest::Approx(std::sqrt(0.1) / 0.5).epsilon(1e-9));
  CHECK(Kernel::power_log(0.5, 0).rho_star(100.0) == doctest::Approx(20.0).epsilon(1e-9));
}

TEST_CASE("tabulated kernels") {
  const auto k = jump_kernel();
  CHECK(k(1.0) == 10.0);
  CHECK(k(0.999) == doctest::Approx(std::sqrt(0.999)).epsilon(1e-9));
  CHECK(k(1e-6) == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK(k(4096.0) == doctest::Approx(640.0).epsilon(1e-9));
  for (double r : {0.001, 0.3, 0.99, 1.0, 3.0, 700.0}) {
    INFO("r=" << r);
    CHECK(k.rho_star(r) - k.rho_star(0.001) == doctest::Approx(simpson_window(k, 0.001, r, {1.0})).epsilon(1e-7));
  }
  CHECK(k.rho_star(1e-4) == doctest::Approx(2.0 * std::sqrt(1e-4)).epsilon(1e-12));
  CHECK(std::isinf(Kernel::tabulated({1, 2}, {2, 1}).rho_star(1.0)));
  CHECK_THROWS_AS(Kernel::tabulated({1, 1, 1, 2}, {1, 2, 3, 4}), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::tabulated({1, 2}, {1, 0}), std::invalid_argument);
}

TEST_CASE("running sup") {
  const auto inc = Kernel::power_alpha(0.5);
  const auto rs = inc.running_sup();
  for (double r : {1e-5, 0.3, 1.0, 17.0}) CHECK(rs(r) == inc(r));
  const auto cut = Kernel::power_exp_cut(0.5);
  const auto rc = cut.running_sup();
  double peak = 0.0;
  for (int j = -1280; j <= 80; ++j) peak = std::max(peak, cut(std::exp2(j / 16.0)));
  CHECK(rc(32.0) == peak);
  CHECK(rc(32.0) >= 0.99 * cut(1.0 / kE));
  const auto rrc = rc.running_sup();
  for (double r : default_kernel_grid()) CHECK(rrc(r) == rc(r));
  double prev = 0.0;
  for (double r : default_kernel_grid()) {
    CHECK(rc(r) >= prev);
    prev = rc(r);
  }
  CHECK(rs.rho_star(1.0) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("power kernel conditions") {
  const auto grid = default_kernel_grid();
  for (double alpha : {0.25, 0.5, 0.75}) {
    const auto c = check_kernel_conditions(Kernel::power_alpha(alpha), 1, grid);
    INFO("alpha=" << alpha);
    CHECK(c.integrable.pass);
    CHECK(c.sup_doubling.pass);
    CHECK(c.sup_doubling.constant.value() ==
          doctest::Approx(std::pow(2.0, alpha) * alpha / (1 - std::pow(2.0, -alpha))).epsilon(1e-6));
    CHECK(c.lipschitz.pass);
    CHECK(c.almost_decreasing.pass);
    CHECK(c.epsilon == 1.0 - alpha);
    CHECK(c.propagation.pass);
    CHECK(c.rho_star_doubling.pass);
    CHECK(c.rho_star_doubling.constant.value() == doctest::Approx(std::pow(2.0, alpha)));
  }
  const auto c2 = check_kernel_conditions(Kernel::power_alpha(1.5), 2, grid);
  CHECK(c2.epsilon == 0.5);
  CHECK(c2.sup_doubling.pass);
  const auto bad = check_kernel_conditions(Kernel::power_alpha(1.0), 1, grid);
  CHECK_FALSE(bad.almost_decreasing.pass);
  CHECK_THROWS_AS(check_kernel_conditions(Kernel::power_alpha(0.5), 3, grid), std::invalid_argument);
}

TEST_CASE("power-log kernel is Lipschitz in the ratio band") {
  const auto c = check_kernel_conditions(Kernel::power_log(0.5, 1), 1, default_kernel_grid());
  CHECK(c.lipschitz.pass);
  CHECK(std::isfinite(c.lipschitz.constant.value()));
  CHECK(c.integrable.pass);
  CHECK(c.almost_decreasing.pass);
}

TEST_CASE("a jump by ten breaks the sup-doubling certificate") {
  const auto c = check_kernel_conditions(jump_kernel(), 1, default_kernel_grid());
  CHECK_FALSE(c.sup_doubling.pass);
  CHECK(c.sup_doubling.witnesses.at(0) >= 0.5);
  CHECK(c.sup_doubling.witnesses.at(0) < 1.0);
  CHECK(c.sup_doubling.constant.value() > 16.0);
}

TEST_CASE("divergent kernels are reported, not thrown") {
  const auto c = check_kernel_conditions(Kernel::max_log(0.5), 1, default_kernel_grid());
  CHECK_FALSE(c.integrable.pass);
  CHECK(c.integrable.constant.is_infinite());
  CHECK_FALSE(c.lipschitz.pass);
  CHECK_FALSE(c.propagation.pass);
  CHECK(c.sup_doubling.pass);
}

TEST_CASE("almost-decreasing implies sup-doubling and propagates to rho star") {
  const std::vector<Kernel> table = {Kernel::power_alpha(0.5), Kernel::log_kernel(0.5), Kernel::log_kernel(2),
                                     Kernel::max_log(1.5), Kernel::max_log(0.5), Kernel::power_log(0.5, 1),
                                     Kernel::power_log(0.3, -1), Kernel::power_exp_cut(0.5)};
  const auto grid = default_kernel_grid();
  for (int n : {1, 2}) {
    for (const auto& k : table) {
      const auto c = check_kernel_conditions(k, n, grid);
      INFO(k.describe() << " n=" << n);
      if (c.almost_decreasing.pass) CHECK(c.sup_doubling.pass);
      if (c.almost_decreasing.pass && c.integrable.pass) {
        CHECK(c.propagation.pass);
        CHECK(c.propagation.constant.value() <= 1 + std::pow(c.almost_decreasing.constant.value(), 2));
      }
    }
  }
}

TEST_CASE("rho star is increasing on every grid") {
  for (const auto& k : {Kernel::power_alpha(0.5), Kernel::log_kernel(1), Kernel::max_log(2),
                        Kernel::power_log(0.5, 1), Kernel::power_exp_cut(0.5), jump_kernel()}) {
    double prev = 0.0;
    for (double r : default_kernel_grid()) {
      const double v = k.rho_star(r);
      INFO(k.describe() << " r=" << r);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("almost monotone constants") {
  CHECK(almost_decreasing_constant({3, 2, 1}) == 1.0);
  CHECK(almost_decreasing_constant({1, 2, 1}) == 2.0);
  CHECK(almost_increasing_constant({1, 2, 3}) == 1.0);
  CHECK(almost_increasing_constant({2, 1, 3}) == 2.0);
}
