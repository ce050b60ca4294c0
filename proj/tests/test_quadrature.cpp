#include <doctest.h>

#include <cmath>

#include "hallbraid/quadrature.hpp"
#include "oracles.hpp"

using namespace hallbraid;

namespace {

// Dumb dense composite-Simpson reference over [a, b].
double simpson(const std::function<double(double)>& f, double a, double b,
               int intervals) {
  const double h = (b - a) / intervals;
  double acc = f(a) + f(b);
  for (int i = 1; i < intervals; ++i)
    acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("adaptive Gauss-Kronrod integrates smooth functions tightly") {
  const double got =
      integrate_adaptive([](double x) { return std::exp(x); }, {0.0, 1.0});
  CHECK(got == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));

  const double poly = integrate_adaptive(
      [](double x) { return x * x * (1.0 - x); }, {0.0, 0.4, 1.0});
  CHECK(poly == doctest::Approx(1.0 / 3.0 - 1.0 / 4.0).epsilon(1e-13));
}

TEST_CASE("adaptive quadrature rejects bad breakpoints and blowups") {
  CHECK_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, {1.0}),
                  QuadratureError);
  CHECK_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, {1.0, 0.0}),
                  QuadratureError);
  CHECK_THROWS_AS(
      integrate_adaptive([](double x) { return 1.0 / x; }, {0.0, 1.0}, 1e-9,
                         0.0, 40),
      QuadratureError);
}

TEST_CASE("symmetric power tail matches a dense reference") {
  const double p = 1.1;
  for (double w : {-3.0, 0.0, 2.0, 7.5}) {
    const double u0 = 6.0;
    const double got = power_tail_sym(u0, w, p);
    // Reference: substitute u = u0/t and integrate the compact image.
    auto g = [&](double t) {
      if (t <= 0.0) return 0.0;
      const double u = u0 / t;
      return std::pow(u * u + w, -p) * u0 / (t * t);
    };
    const double want = simpson(g, 1e-9, 1.0, 200000);
    CHECK(got == doctest::Approx(want).epsilon(1e-8));
  }
  CHECK_THROWS_AS(power_tail_sym(1.0, 5.0, 1.1), QuadratureError);
}

TEST_CASE("two-kink integral matches a dumb dense quadrature") {
  const double b2 = 1.1;  // 2b with b = 0.55
  struct Case {
    double a1, c1, a2, c2;
  };
  for (const Case& tc : {Case{1.0, 0.0, 4.0, 3.0}, Case{9.0, -5.0, 1.0, 2.5},
                         Case{2.0, 7.0, 2.0, 7.0}}) {
    auto f = [&](double x) {
      return std::pow(tc.a1 + std::abs(x - tc.c1), -b2) *
             std::pow(tc.a2 + std::abs(x - tc.c2), -b2);
    };
    const double mid = simpson(f, -4e4, 4e4, 4000000);
    // First-order tail estimate beyond the dense window.
    const double tail = 2.0 * std::pow(4e4, 1.0 - 2.0 * b2) / (2.0 * b2 - 1.0);
    const double want = mid + tail;
    const double got = two_kink_integral(tc.a1, tc.c1, b2, tc.a2, tc.c2, b2);
    CHECK(std::abs(got - want) < 2e-4 * want);
  }
}

TEST_CASE("two-kink integral supports distinct exponents") {
  // Cross-check the generic-exponent path against the symmetric one.
  const double got_sym = two_kink_integral(1.0, 0.0, 1.1, 4.0, 3.0, 1.1);
  const double got_gen = two_kink_integral(1.0, 0.0, 1.1 + 1e-13, 4.0, 3.0,
                                           1.1);
  CHECK(got_gen == doctest::Approx(got_sym).epsilon(1e-6));
}
