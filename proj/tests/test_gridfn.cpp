#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "orlicz/gridfn.hpp"
#include "orlicz/numeric.hpp"
#include "orlicz/parse.hpp"

using namespace orlicz;

namespace {

GridFunction steps_1d(double h, double x0, const std::vector<double>& v) {
  return GridFunction(GridGeometry::line(h, x0, v.size()), v);
}

GridFunction random_step(std::mt19937_64& rng, std::size_t cells, double h) {
  std::uniform_int_distribution<int> level(-3, 3);
  std::vector<double> v(cells);
  for (auto& x : v) x = 0.5 * level(rng);
  return steps_1d(h, -0.5 * h * cells, v);
}

// Weak norm by a dense scan over t approaching each level from below, then bisection on λ.
double dense_weak_norm(const GridFunction& f, const YoungFunction& phi) {
  auto weak = [&](double lambda) {
    double best = 0.0;
    for (int i = 1; i <= 400000; ++i) {
      const double t = 4.0 * f.max_abs() / lambda * i / 400000.0;
      best = std::max(best, phi(t) * distribution_function(f, t * lambda));
    }
    return best;
  };
  double lo = 1e-3;
  double hi = 1e3;
  for (int i = 0; i < 60; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (weak(mid) <= 1.0) hi = mid; else lo = mid;
  }
  return hi;
}

}  // namespace

TEST_CASE("luxemburg norm examples") {
  const auto chi = steps_1d(0.25, 0.0, std::vector<double>(16, 1.0));
  CHECK(luxemburg_norm(chi, YoungFunction::power(2)) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(luxemburg_norm(chi, YoungFunction::power(2)) == doctest::Approx(exact_char_norm(4.0, YoungFunction::power(2))).epsilon(1e-9));
  CHECK(luxemburg_norm(steps_1d(1, 0, {0, 0, 0}), YoungFunction::power(2)) == 0.0);
  CHECK(luxemburg_norm(steps_1d(1, 0, {2, 1, 1}), YoungFunction::power(1)) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(luxemburg_norm(steps_1d(1, 0, {2, -1, 1}), YoungFunction::step_infinity()) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("weak norm examples") {
  const auto chi = steps_1d(0.5, 1.0, std::vector<double>(6, 1.0));
  for (const auto& phi : {YoungFunction::power(2), YoungFunction::power_minus_one(2), YoungFunction::exp_power(1),
                          YoungFunction::step_infinity(), YoungFunction::max_power(1, 3)}) {
    CHECK(weak_luxemburg_norm(chi, phi) == luxemburg_norm(chi, phi));
  }
  CHECK(weak_luxemburg_norm(steps_1d(1, 0, {0, 0}), YoungFunction::power(2)) == 0.0);
  const auto two = steps_1d(1, 0, {2, 1});
  const auto p2 = YoungFunction::power(2);
  CHECK(weak_luxemburg_norm(two, p2) == doctest::Approx(dense_weak_norm(two, p2)).epsilon(1e-5));
  CHECK(weak_luxemburg_norm(two, p2) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("distribution function") {
  const auto chi = steps_1d(0.5, 0.0, {1, 1});
  CHECK(distribution_function(chi, 0.5) == 1.0);
  CHECK(distribution_function(chi, 1.0) == 0.0);
  CHECK(distribution_function(steps_1d(1, 0, {2, 1, 1}), 1.5) == 1.0);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_step(rng, 37, 0.125);
    for (double t : {0.1, 0.5, 0.75, 1.0, 1.4}) {
      double brute = 0.0;
      for (std::size_t i = 0; i < 37; ++i) {
        if (std::abs(f.value_at(f.geometry().center_x(i))) > t) brute += 0.125;
      }
      CHECK(distribution_function(f, t) == brute);
    }
  }
  CHECK_THROWS_AS(distribution_function(chi, 0.0), std::invalid_argument);
}

TEST_CASE("exact characteristic norms") {
  for (double m : {0.5, 2.0, 9.0}) {
    CHECK(exact_char_norm(m, YoungFunction::power(3)) == doctest::Approx(std::cbrt(m)).epsilon(1e-14));
    CHECK(exact_char_norm(m, YoungFunction::step_infinity()) == 1.0);
  }
  CHECK(exact_char_norm(1.0, YoungFunction::power_minus_one(2)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(exact_char_norm(0.0, YoungFunction::power(2)), std::invalid_argument);
}

TEST_CASE("characteristic functions on both norms") {
  const std::vector<YoungFunction> fams = {YoungFunction::power(1.5), YoungFunction::power_minus_one(2),
                                           YoungFunction::exp_power(1), YoungFunction::max_power(1, 2),
                                           YoungFunction::power_log(2, 1)};
  for (double m : {0.25, 1.0, 4.0, 16.0, 64.0}) {
    const std::size_t cells = 64;
    const auto chi = steps_1d(m / cells, -3.0, std::vector<double>(cells, 1.0));
    for (const auto& phi : fams) {
      const double want = exact_char_norm(m, phi);
      INFO(phi.describe() << " |G|=" << m);
      CHECK(luxemburg_norm(chi, phi) == doctest::Approx(want).epsilon(1e-9));
      CHECK(weak_luxemburg_norm(chi, phi) == doctest::Approx(want).epsilon(1e-9));
    }
  }
  const auto sq = GridFunction(GridGeometry::plane(0.5, 0, 0, 4, 4), std::vector<double>(16, 1.0));
  CHECK(luxemburg_norm(sq, YoungFunction::power(2)) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("generalized Holder inequality on random steps") {
  std::mt19937_64 rng(99);
  const std::vector<YoungFunction> fams = {YoungFunction::power(1), YoungFunction::power(1.5), YoungFunction::power(3),
                                           YoungFunction::max_power(1.5, 3), YoungFunction::power_minus_one(2),
                                           YoungFunction::step_infinity()};
  for (const auto& phi : fams) {
    const auto psi = complementary(phi);
    for (int trial = 0; trial < 15; ++trial) {
      const auto f = random_step(rng, 24, 0.25);
      const auto g = random_step(rng, 24, 0.25);
      const double lhs = f.times(g).abs().integral();
      const double rhs = 2.0 * luxemburg_norm(f, phi) * luxemburg_norm(g, psi);
      INFO(phi.describe());
      CHECK(lhs <= rhs * (1 + 1e-9));
    }
  }
}

TEST_CASE("complement chi bound") {
  for (const auto& phi : {YoungFunction::power(1.5), YoungFunction::power(4), YoungFunction::max_power(1.5, 3)}) {
    const auto psi = complementary(phi);
    for (double m : {0.01, 0.5, 1.0, 3.0, 100.0}) {
      const double lhs = exact_char_norm(m, psi);
      CHECK(lhs == doctest::Approx(1.0 / psi.inverse(1.0 / m)));
      CHECK(lhs <= m * phi.inverse(1.0 / m) * (1 + 1e-6));
    }
  }
}

TEST_CASE("weak modular identity") {
  std::mt19937_64 rng(5);
  for (const auto& phi : {YoungFunction::power(2), YoungFunction::exp_power(1), YoungFunction::power_minus_one(3)}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto f = random_step(rng, 20, 0.5);
      if (f.is_zero()) continue;
      const double lhs = weak_modular(f, phi, 1.0);
      // sup_t t m(Φ(|f|), t): attained as t approaches a value of Φ(|f|) from below.
      const auto pf = f.map([&phi](double v) { return phi(std::abs(v)); });
      double rhs = 0.0;
      for (double v : pf.values()) {
        if (v <= 0.0) continue;
        double measure = 0.0;
        for (double w : pf.values()) {
          if (w >= v) measure += 0.5;
        }
        rhs = std::max(rhs, v * measure);
      }
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
    }
  }
}

TEST_CASE("homogeneity and weak below strong") {
  std::mt19937_64 rng(17);
  for (const auto& phi : {YoungFunction::power(1), YoungFunction::power(2.5), YoungFunction::exp_power(1),
                          YoungFunction::step_infinity(), YoungFunction::power_log(2, 1)}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto f = random_step(rng, 30, 0.2);
      const double s = luxemburg_norm(f, phi);
      const double w = weak_luxemburg_norm(f, phi);
      INFO(phi.describe());
      CHECK(w <= s * (1 + 1e-12));
      for (double c : {-3.0, 0.125, 7.0}) {
        CHECK(luxemburg_norm(f.scaled(c), phi) == doctest::Approx(std::abs(c) * s).epsilon(1e-10));
        CHECK(weak_luxemburg_norm(f.scaled(c), phi) == doctest::Approx(std::abs(c) * w).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("grid file round trip") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  std::vector<double> v(12);
  for (auto& x : v) x = u(rng) / 3.0;
  const GridFunction f1(GridGeometry::line(0.1, -0.35, 12), v);
  const GridFunction f2(GridGeometry::plane(0.3, -1.0 / 3.0, 0.7, 4, 3), v);
  for (const auto& f : {f1, f2}) {
    std::stringstream ss;
    write_grid(ss, f);
    const auto back = read_grid(ss);
    CHECK(back == f);
  }
  std::stringstream csv;
  write_csv(csv, steps_1d(0.5, 0, {1, 2}));
  CHECK(csv.str() == "x,f\n0.25,1\n0.75,2\n");
  std::stringstream bad("3 0.1 0\n1\n");
  CHECK_THROWS_AS(read_grid(bad), ParseError);
  std::stringstream bad2("1 0.1 0\n1\nzz\n");
  CHECK_THROWS_AS(read_grid(bad2), ParseError);
}

TEST_CASE("builtins and geometry") {
  const auto g = GridGeometry::line(0.25, -2, 16);
  const auto chi = make_builtin("chi:a=0,b=1", g);
  CHECK(chi.integral() == 1.0);
  CHECK(make_builtin("sign", g).value_at(-1.0) == -1.0);
  CHECK(make_builtin("log-abs", g).value_at(1.1) == doctest::Approx(std::log(1.125)));
  CHECK(make_builtin("abs-pow:beta=0.5", g).value_at(-1.1) == doctest::Approx(std::sqrt(1.125)));
  CHECK(make_builtin("const:c=3", g).integral() == 12.0);
  CHECK_THROWS_AS(make_builtin("gauss", g), ParseError);
  CHECK(chi.value_at(-5.0) == 0.0);
  CHECK(chi.value_at(2.0) == 0.0);
  const auto fine = chi.resampled(g.refined(2));
  CHECK(fine.integral() == 1.0);
  CHECK(fine.geometry().nx == 32);
  const auto g2 = GridGeometry::plane(0.5, -1, -1, 4, 4);
  CHECK(make_builtin("chi:a=0,b=1", g2).integral() == 1.0);
  CHECK(make_builtin("abs-pow:beta=2", g2).value(0, 0) == doctest::Approx(2 * 0.75 * 0.75));
  CHECK_THROWS_AS(GridFunction(g, std::vector<double>(3)), std::invalid_argument);
  CHECK_THROWS_AS(GridGeometry::line(0, 0, 3), std::invalid_argument);
}
