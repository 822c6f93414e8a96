#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mlephase/quadrature.hpp"
#include "oracles.hpp"

using namespace mlephase;

namespace {

double weight_sum(const QuadratureRule& r)
{
  return std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
}

void check_moments(const QuadratureRule& r, double tol)
{
  CHECK(std::abs(weight_sum(r) - 1.0) < 1e-12);
  CHECK(std::abs(r.expect([](double x) { return x; })) < tol);
  CHECK(std::abs(r.expect([](double x) { return x * x; }) - 1.0) < tol);
  CHECK(std::abs(r.expect([](double x) { return x * x * x; })) < tol);
  CHECK(std::abs(r.expect([](double x) { return x * x * x * x; }) - 3.0) < 10 * tol);
  for (double w : r.weights)
    CHECK(w >= 0.0);
}

}  // namespace

TEST_SUITE("quadrature")
{
  TEST_CASE("gauss-hermite invariants")
  {
    for (std::size_t order : {8u, 16u, 32u, 64u, 100u}) {
      CAPTURE(order);
      const auto r = gauss_hermite_rule(order);
      REQUIRE(r.order() == order);
      check_moments(r, 1e-10);
      for (std::size_t k = 0; k < order; ++k)
        CHECK(r.nodes[k] == doctest::Approx(-r.nodes[order - 1 - k]).epsilon(1e-13));
    }
    CHECK_THROWS_AS(gauss_hermite_rule(0), std::invalid_argument);
    CHECK(gauss_hermite_rule(1).nodes[0] == 0.0);
  }

  TEST_CASE("gauss-hermite is exact through degree 2n-1")
  {
    // E X^{2k} = (2k-1)!!
    const auto r = gauss_hermite_rule(10);
    double dfact = 1.0;
    for (int k = 1; k <= 9; ++k) {
      dfact *= 2 * k - 1;
      const double m = r.expect([k](double x) { return std::pow(x, 2 * k); });
      CHECK(m == doctest::Approx(dfact).epsilon(1e-11));
    }
  }

  TEST_CASE("gauss-legendre")
  {
    const auto r = gauss_legendre_rule(12);
    CHECK(std::abs(weight_sum(r) - 2.0) < 1e-13);
    for (int d = 0; d <= 23; ++d) {
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(std::abs(r.expect([d](double x) { return std::pow(x, d); }) - exact) < 1e-13);
    }
  }

  TEST_CASE("graded rule integrates smooth moments")
  {
    for (auto [b, g] : {std::pair{0.0, 0.0}, {0.0, 1.0}, {2.0, 0.5}, {-1.0, 30.0}, {0.5, 1000.0}}) {
      CAPTURE(b);
      CAPTURE(g);
      check_moments(graded_rule(ModelParams(b, g)), 1e-10);
    }
  }

  TEST_CASE("graded rule resolves a sharp sigmoid")
  {
    // E sigmoid(g X) X = odd part; Simpson with a fine grid is the reference.
    for (double g : {5.0, 50.0, 500.0}) {
      auto f = [g](double x) { return x / (1.0 + std::exp(-g * x)); };
      const double ref = oracle::simpson([&](double x) { return oracle::std_normal_density(x) * f(x); }, -12, 12,
                                         400000);
      const double got = graded_rule(ModelParams(0.0, g)).expect(f);
      CHECK(std::abs(got - ref) < 1e-10);
    }
  }

  TEST_CASE("yv quadrature against Monte Carlo")
  {
    const ModelParams params(0.8, 1.7);
    const auto rule = graded_rule(params);
    CHECK(yv_quadrature(params, rule, [](double, double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-12));

    const auto draws = oracle::objective_monte_carlo(0.8, 1.7, 0.3, -0.6, 2'000'000, 99);
    const double quad = yv_quadrature(params, rule, [](double y, double v) {
      return oracle::psi_moments(0.3 * y - 0.6 * v);
    });
    CHECK(std::abs(quad - draws.mean) < 4.0 * draws.stderr_);
  }
}
