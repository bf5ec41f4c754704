#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doleans/conditions.hpp"
#include "doleans/divergence.hpp"
#include "doleans/monte_carlo.hpp"
#include "doleans/rng.hpp"
#include "oracles.hpp"

using namespace doleans;

namespace {

struct ThreadsEnv {
  explicit ThreadsEnv(const char* v) { setenv("DOLEANS_THREADS", v, 1); }
  ~ThreadsEnv() { unsetenv("DOLEANS_THREADS"); }
};

double first_jump(const JumpPath& p) { return p.jumps.empty() ? 0.0 : p.jumps.front().size; }

}  // namespace

TEST_CASE("running stats against the two-pass formula") {
  StreamRng rng(1, 0);
  std::vector<double> xs(10000);
  for (double& x : xs) x = 1e6 + rng.next_open_unit();
  RunningStats s;
  for (double x : xs) s.add(x);
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  CHECK(s.mean() == doctest::Approx(mean).epsilon(1e-13));
  CHECK(s.variance() == doctest::Approx(ss / static_cast<double>(xs.size() - 1)).epsilon(1e-9));
  CHECK(RunningStats{}.variance() == 0.0);
}

TEST_CASE("property: merging blocks equals one pass") {
  StreamRng rng(2, 0);
  RunningStats all;
  RunningStats a;
  RunningStats b;
  for (int i = 0; i < 5000; ++i) {
    const double x = rng.next_open_unit() * 10.0;
    all.add(x);
    (i < 1234 ? a : b).add(x);
  }
  a.merge(b);
  CHECK(a.count() == all.count());
  CHECK(a.mean() == doctest::Approx(all.mean()).epsilon(1e-13));
  CHECK(a.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
  RunningStats empty;
  empty.merge(all);
  CHECK(empty.mean() == all.mean());
}

TEST_CASE("property: estimates are bit-identical for any thread count") {
  const ProcessModel m = example3_model();
  auto fn = [](const JumpPath& p) { return std::exp(-p.horizon) + first_jump(p); };
  Estimate e1;
  Estimate e4;
  {
    ThreadsEnv env("1");
    CHECK(worker_count() == 1);
    e1 = estimate_expectation(m, fn, 50000, SeedSpec{9});
  }
  {
    ThreadsEnv env("4");
    CHECK(worker_count() == 4);
    e4 = estimate_expectation(m, fn, 50000, SeedSpec{9});
  }
  CHECK(e1.mean == e4.mean);
  CHECK(e1.se == e4.se);
  CHECK(e1.n == e4.n);
  const Estimate other = estimate_expectation(m, fn, 50000, SeedSpec{10});
  CHECK(other.mean != e1.mean);
}

TEST_CASE("constant functional has zero standard error") {
  const Estimate e = estimate_expectation(example1_model(), [](const JumpPath&) { return 2.5; }, 1000, SeedSpec{1});
  CHECK(e.mean == 2.5);
  CHECK(e.se == 0.0);
  CHECK(e.n == 1000);
}

TEST_CASE("estimates match a known mean") {
  // E e^{-tau} = 1/2 for a unit exponential.
  const Estimate e =
      estimate_expectation(example2_model(), [](const JumpPath& p) { return std::exp(-p.horizon); }, 200000, SeedSpec{4});
  CHECK(std::fabs(e.mean - 0.5) <= 4.0 * e.se);
  CHECK(e.se == doctest::Approx(std::sqrt(1.0 / 12.0 / 200000.0)).epsilon(0.05));
}

TEST_CASE("non-finite values") {
  const ProcessModel m = example1_model();
  // A handful of NaNs is tolerated and counted; P(xi > 0.9) = e^{-9} / 2.
  const Estimate e = estimate_expectation(
      m, [](const JumpPath& p) { return p.jumps[0].size > 0.9 ? std::nan("") : 1.0; }, 100000, SeedSpec{3});
  CHECK(e.non_finite > 0);
  CHECK(e.non_finite <= 100);
  CHECK(e.n + e.non_finite == 100000);
  CHECK_THROWS_AS(estimate_expectation(
                      m, [](const JumpPath& p) { return p.jumps[0].size > 0.0 ? HUGE_VAL : 1.0; }, 10000, SeedSpec{3}),
                  EstimationError);
}

TEST_CASE("argument checks") {
  auto fn = [](const JumpPath&) { return 1.0; };
  CHECK_THROWS_AS(estimate_expectation(example1_model(), fn, 1, SeedSpec{1}), std::invalid_argument);
  CHECK_THROWS_AS(estimate_expectation(example1_model(), fn, 100, SeedSpec{1, 0}), std::invalid_argument);
}

TEST_CASE("vector estimates share paths") {
  const auto es = estimate_expectations(
      example2_model(),
      [](const JumpPath& p, std::vector<double>& out) {
        out[0] = std::exp(-p.horizon);
        out[1] = 1.0 - std::exp(-p.horizon);
      },
      2, 20000, SeedSpec{5});
  REQUIRE(es.size() == 2);
  CHECK(es[0].mean + es[1].mean == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(es[0].se == doctest::Approx(es[1].se).epsilon(1e-9));
}

TEST_CASE("capped paths are counted") {
  const Estimate e = estimate_expectation(example2_model(0.5), [](const JumpPath& p) { return p.horizon; }, 10000,
                                          SeedSpec{6});
  // P(tau > 0.5) = e^{-1/2}.
  CHECK(static_cast<double>(e.capped) / 10000.0 == doctest::Approx(std::exp(-0.5)).epsilon(0.05));
}

TEST_CASE("fit_line") {
  const auto f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  const auto g = fit_line({1, 2, 3, 4}, {1, -1, 1, -1});
  CHECK(g.r_squared < 0.5);
  CHECK_THROWS(fit_line({1}, {1}));
}

TEST_CASE("divergence: Example I Jacod truncations grow like |ln delta| / 2") {
  const auto xi = make_xi_distribution();
  // E exp(jacod term) 1{xi > -1 + delta}, through the Boost oracle.
  auto family = [&](double delta) {
    auto f = [&](double x) { return std::exp(std::log1p(x) - x / (1.0 + x) + xi.log_density(x)); };
    return oracle::integrate(f, -1.0 + delta, 0.0) + oracle::integrate(f, 0.0, 1.0);
  };
  const auto ev = detect_divergence(family, {1e-2, 1e-3, 1e-4, 1e-5}, GrowthModel::kLog);
  CHECK(ev.verdict == Verdict::kDiverging);
  CHECK(ev.strictly_increasing);
  CHECK(ev.fit.slope >= 0.45);
  CHECK(ev.fit.slope <= 0.55);
}

TEST_CASE("divergence: E e^tau truncated at T grows like T") {
  auto family = [](double t) { return t; };
  const auto ev = detect_divergence(family, {10, 20, 40, 80}, GrowthModel::kLinear);
  CHECK(ev.verdict == Verdict::kDiverging);
  const auto ex = make_first_jump_time();
  auto quad = [&](double t) { return oracle::integrate([&](double s) { return std::exp(s) * ex.density(s); }, 0.0, t); };
  const auto ev2 = detect_divergence(quad, {10, 20, 40, 80}, GrowthModel::kLinear);
  CHECK(ev2.fit.slope >= 0.99);
  CHECK(ev2.fit.slope <= 1.01);
}

TEST_CASE("divergence: saturating and degenerate families") {
  const auto flat = detect_divergence([](double) { return 3.0; }, {1, 2, 3, 4}, GrowthModel::kLinear);
  CHECK(flat.verdict == Verdict::kInconclusive);
  CHECK_FALSE(flat.strictly_increasing);
  const auto sat = detect_divergence([](double t) { return 1.0 - std::exp(-t); }, {1, 2, 3, 4}, GrowthModel::kLinear);
  CHECK(sat.verdict == Verdict::kInconclusive);
  const auto nan = detect_divergence([](double t) { return t > 2 ? std::nan("") : t; }, {1, 2, 3, 4}, GrowthModel::kLinear);
  CHECK(nan.verdict == Verdict::kInconclusive);
  CHECK_THROWS_AS(detect_divergence([](double t) { return t; }, {1, 2, 3}, GrowthModel::kLinear), std::invalid_argument);
  CHECK_THROWS_AS(detect_divergence([](double t) { return t; }, {4, 3, 2, 1}, GrowthModel::kLinear),
                  std::invalid_argument);
  // Decreasing delta is increasing |ln delta|.
  CHECK_NOTHROW(detect_divergence([](double d) { return -std::log(d); }, {1e-2, 1e-3, 1e-4, 1e-5}, GrowthModel::kLog));
}

TEST_CASE("divergence: exponential model fits log values") {
  const auto ev = detect_divergence([](double k) { return std::exp(0.7 * k + 1.0); }, {10, 20, 40, 80},
                                    GrowthModel::kExponential);
  CHECK(ev.verdict == Verdict::kDiverging);
  CHECK(ev.fit.slope == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("growth model names") {
  for (GrowthModel m : {GrowthModel::kLog, GrowthModel::kLinear, GrowthModel::kExponential})
    CHECK(parse_growth_model(to_string(m)) == m);
  CHECK(to_string(Verdict::kFinite) == "finite");
  CHECK(to_string(Verdict::kDiverging) == "diverging");
  CHECK(to_string(Verdict::kInconclusive) == "inconclusive");
  CHECK_THROWS(parse_growth_model("quadratic"));
}
