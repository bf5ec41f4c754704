#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "doleans/quadrature.hpp"
#include "oracles.hpp"

using namespace doleans;

TEST_CASE("known integrals") {
  const auto r1 = integrate([](double) { return 1.0; }, 0.0, 1.0);
  CHECK(r1.converged);
  CHECK(r1.value == doctest::Approx(1.0).epsilon(1e-15));

  const auto r2 = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(r2.value == doctest::Approx(2.0).epsilon(1e-13));

  // Integrable endpoint singularity.
  const auto r3 = integrate([](double x) { return std::log(x); }, 0.0, 1.0);
  CHECK(r3.converged);
  CHECK(r3.value == doctest::Approx(-1.0).epsilon(1e-10));

  const auto r4 = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(r4.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("infinite ranges") {
  const auto r1 = integrate([](double x) { return std::exp(-x); }, 0.0, std::numeric_limits<double>::infinity());
  CHECK(r1.converged);
  CHECK(r1.value == doctest::Approx(1.0).epsilon(1e-12));

  const auto r2 = integrate([](double x) { return 1.0 / (x * x); }, 1.0, std::numeric_limits<double>::infinity());
  CHECK(r2.value == doctest::Approx(1.0).epsilon(1e-12));

  const auto r3 = integrate([](double x) { return x * x * std::exp(-x); }, 2.0,
                            std::numeric_limits<double>::infinity());
  CHECK(r3.value == doctest::Approx(10.0 * std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("agrees with the Boost oracle on oscillatory and peaked integrands") {
  auto f = [](double x) { return std::cos(20.0 * x) * std::exp(-x * x); };
  CHECK(integrate(f, -3.0, 3.0).value == doctest::Approx(oracle::integrate(f, -3.0, 3.0)).epsilon(1e-10));
  auto g = [](double x) { return 1.0 / (1e-4 + (x - 0.3) * (x - 0.3)); };
  CHECK(integrate(g, 0.0, 1.0).value == doctest::Approx(oracle::gauss_kronrod(g, 0.0, 1.0)).epsilon(1e-9));
}

TEST_CASE("non-convergence is reported, not thrown") {
  QuadratureOptions opts;
  opts.max_subdivisions = 3;
  const auto r = integrate([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, opts);
  CHECK_FALSE(r.converged);
  CHECK(r.error > 0.0);

  // A non-integrable singularity never meets the tolerance.
  const auto s = integrate([](double x) { return 1.0 / x; }, 0.0, 1.0);
  CHECK_FALSE(s.converged);
}

TEST_CASE("empty interval") {
  const auto r = integrate([](double x) { return x; }, 2.0, 2.0);
  CHECK(r.value == 0.0);
  CHECK(r.converged);
}
