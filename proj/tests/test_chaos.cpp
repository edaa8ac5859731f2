#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "lilfields/chaos.hpp"
#include "lilfields/quadrature.hpp"
#include "lilfields/rng.hpp"
#include "test_helpers.hpp"

using namespace lilfields;

TEST_SUITE("chaos") {

TEST_CASE("hermite polynomial values") {
  CHECK(hermite_eval(2, 2.0) == 3.0);   // x^2 - 1
  CHECK(hermite_eval(3, 2.0) == 2.0);   // x^3 - 3x
  for (double x : {-2.0, 0.0, 0.5, 3.0}) CHECK(hermite_eval(0, x) == 1.0);
  CHECK(hermite_eval(1, -1.5) == -1.5);
  CHECK(hermite_eval(4, 1.0) == doctest::Approx(1.0 - 6.0 + 3.0));  // x^4 - 6x^2 + 3
}

TEST_CASE("quadrature orthogonality: E[H_q H_m] = q! 1_{q=m}") {
  // tolerance on the natural scale sqrt(q! m!) of the product's L^2 norms;
  // the absolute off-diagonal residual is cancellation noise at that scale
  const QuadratureRule rule = gauss_hermite_probabilists(64);
  for (int q = 0; q <= 10; ++q) {
    for (int m = 0; m <= 10; ++m) {
      double acc = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        acc += rule.weights[k] * hermite_eval(q, rule.nodes[k]) * hermite_eval(m, rule.nodes[k]);
      }
      const double want = q == m ? std::exp(log_factorial(q)) : 0.0;
      const double scale = std::exp(0.5 * (log_factorial(q) + log_factorial(m)));
      CHECK(std::abs(acc - want) <= 1e-8 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("hermite coefficients pick out basis elements") {
  SUBCASE("f = H_3") {
    const HermiteCoeffs c = hermite_coeffs([](double x) { return hermite_eval(3, x); }, 8, 64);
    for (int q = 1; q <= 8; ++q) {
      CHECK(std::abs(c.cq(q) - (q == 3 ? 1.0 : 0.0)) <= 1e-10);
    }
    CHECK(std::abs(c.c0) <= 1e-10);
  }
  SUBCASE("f = H_2") {
    const HermiteCoeffs c = hermite_coeffs([](double x) { return hermite_eval(2, x); }, 6, 64);
    CHECK(c.cq(2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(c.cq(1)) <= 1e-10);
    CHECK(std::abs(c.cq(3)) <= 1e-10);
  }
  SUBCASE("f(x) = x^2 - 1 + x splits into c_1 = c_2 = 1") {
    const HermiteCoeffs c = hermite_coeffs([](double x) { return x * x - 1.0 + x; }, 6, 64);
    CHECK(c.cq(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.cq(2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(c.cq(3)) <= 1e-10);
    CHECK(std::abs(c.c0) <= 1e-10);
  }
  SUBCASE("nodes below 2Q raise the precision flag") {
    const HermiteCoeffs c = hermite_coeffs([](double x) { return x; }, 20, 16);
    CHECK(c.precision_warning);
  }
}

TEST_CASE("polynomial resynthesis from coefficients") {
  // f of degree <= Q: c_0 + sum c_q H_q reproduces f pointwise.
  const auto f = [](double x) { return 0.5 * x * x * x - 2.0 * x * x + x - 0.25; };
  const HermiteCoeffs c = hermite_coeffs(f, 5, 64);
  for (int k = 0; k < 20; ++k) {
    const double x = -3.0 + 6.0 * k / 19.0;
    double acc = c.c0;
    for (int q = 1; q <= c.order(); ++q) acc += c.cq(q) * hermite_eval(q, x);
    CHECK(acc == doctest::Approx(f(x)).epsilon(1e-8));
  }
}

TEST_CASE("series constants") {
  SUBCASE("f = H_2, d = 2, rectangles: sqrt(2!) 2^(3/2) = 4") {
    const SeriesConstant s = series_constant(hermite_delta(2), 2, SumProfile::rectangles);
    CHECK(s.value == doctest::Approx(4.0).epsilon(1e-12));
  }
  SUBCASE("f = H_1 gives 1 for every d on rectangles") {
    for (int d : {1, 2, 3}) {
      CHECK(series_constant(hermite_delta(1), d, SumProfile::rectangles).value ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("f = H_1 + H_2, d = 1: 1 + sqrt(2) sqrt(2) = 3") {
    HermiteCoeffs c;
    c.c = {1.0, 1.0};
    CHECK(series_constant(c, 1, SumProfile::rectangles).value ==
          doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("set-sequence profile uses exponent 1/2") {
    const SeriesConstant s = series_constant(hermite_delta(2), 3, SumProfile::set_sequence);
    CHECK(s.value == doctest::Approx(std::sqrt(2.0) * std::sqrt(2.0)).epsilon(1e-12));
  }
  SUBCASE("slowly decaying coefficients raise the tail flag") {
    HermiteCoeffs c;
    for (int q = 1; q <= 10; ++q) c.c.push_back(std::exp(-0.5 * log_factorial(q)));
    CHECK(series_constant(c, 1, SumProfile::rectangles).tail_flag);
    CHECK_FALSE(series_constant(hermite_delta(2, 10), 1, SumProfile::rectangles).tail_flag);
  }
}

TEST_CASE("conditional hermite projection") {
  SUBCASE("s = 1 returns H_q(u)") {
    for (int q : {0, 1, 2, 5}) {
      for (double u : {-1.0, 0.3, 2.0}) {
        CHECK(conditional_hermite_projection(q, 1.0, u) == hermite_eval(q, u));
      }
    }
  }
  SUBCASE("s = 0 kills every positive level") {
    CHECK(conditional_hermite_projection(2, 0.0, 1.7) == 0.0);
    CHECK(conditional_hermite_projection(5, 0.0, -0.4) == 0.0);
    CHECK(conditional_hermite_projection(0, 0.0, 0.9) == 1.0);
  }
  SUBCASE("Monte Carlo conditional expectation matches s^q H_q(u)") {
    // E[H_2(0.6 u + 0.8 V)] over V should equal 0.36 (u^2 - 1).
    const double s = 0.6;
    const double t = std::sqrt(1.0 - s * s);
    for (double u : {-1.0, 0.5, 2.0}) {
      SiteStream stream(33);
      const int n = 1000000;
      std::vector<double> vals(n);
      for (int k = 0; k < n; ++k) vals[k] = hermite_eval(2, s * u + t * stream.next_normal());
      const auto [mean, se] = testing::mean_se(vals);
      CHECK(std::abs(mean - conditional_hermite_projection(2, s, u)) < 3.0 * se);
      CHECK(conditional_hermite_projection(2, s, u) ==
            doctest::Approx(0.36 * (u * u - 1.0)).epsilon(1e-12));
    }
  }
}

}  // TEST_SUITE
