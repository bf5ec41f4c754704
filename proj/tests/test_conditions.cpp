#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "doleans/conditions.hpp"
#include "doleans/report.hpp"
#include "oracles.hpp"

using namespace doleans;

namespace {

double example2_bound(double a) {
  const double delta = a / (2.0 * (1.0 + a));
  const double g = -std::log(delta) - 1.0;
  return std::exp(a + 2.0 * delta + 2.0 * g);
}

}  // namespace

TEST_CASE("quadrature_expectation examples") {
  const auto xi = make_xi_distribution();
  CHECK(quadrature_expectation(xi, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::fabs(quadrature_expectation(xi, [](double x) { return x; })) <= 1e-10);
  // E(1+xi) = 1: the martingale property of Example I, exactly.
  CHECK(std::fabs(quadrature_expectation(xi, [](double x) { return 1.0 + x; }) - 1.0) <= 1e-8);

  const double v1 = quadrature_expectation_log(xi, [](double x) { return 2.0 * std::log1p(x) - x / (1.0 + x); });
  CHECK(v1 == doctest::Approx(oracle::kV1).epsilon(1e-10));
  CHECK(v1 <= 2.5);

  const auto ex = make_first_jump_time();
  for (double t : {10.0, 20.0, 40.0, 80.0})
    CHECK(quadrature_expectation(ex, [](double s) { return std::exp(s); }, t) == doctest::Approx(t).epsilon(1e-10));

  // Example II martingale property: E e(1 + e^tau) e^{-e^tau} = 1.
  const double m2 = quadrature_expectation_log(ex, [](double s) {
    const double y = std::exp(s);
    return std::isinf(y) ? -HUGE_VAL : 1.0 + std::log1p(y) - y;
  });
  CHECK(m2 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("quadrature_expectation reports unreachable accuracy") {
  const auto ex = make_first_jump_time();
  CHECK_THROWS_AS(quadrature_expectation(ex, [](double s) { return std::exp(s); }), AccuracyError);
}

TEST_CASE("default truncation families") {
  const auto fx = default_truncation(make_xi_distribution());
  CHECK(fx.model == GrowthModel::kLog);
  CHECK(fx.levels == std::vector<double>{1e-2, 1e-3, 1e-4, 1e-5});
  const auto fe = default_truncation(make_eta_distribution());
  CHECK(fe.model == GrowthModel::kLog);
  CHECK(fe.levels.front() == 1e2);
  CHECK(fe.levels.back() == 1e8);
  const auto ft = default_truncation(make_first_jump_time());
  CHECK(ft.model == GrowthModel::kLinear);
  CHECK(ft.levels == std::vector<double>{10, 20, 40, 80});
}

TEST_CASE("Example I verdicts") {
  const auto jacod = evaluate_condition(example1_model(), ConditionSpec::jacod(), SeedSpec{1});
  CHECK(jacod.verdict == Verdict::kDiverging);
  REQUIRE(jacod.divergence);
  CHECK(jacod.divergence->slope >= 0.45);
  CHECK(jacod.divergence->slope <= 0.55);
  CHECK(jacod.divergence->r_squared >= 0.99);
  CHECK_FALSE(jacod.quadrature);

  const auto t1 = evaluate_condition(example1_model(), ConditionSpec::theorem1(PredictableControl::constant(1.0)),
                                     SeedSpec{1});
  CHECK(t1.verdict == Verdict::kFinite);
  REQUIRE(t1.quadrature);
  CHECK(*t1.quadrature == doctest::Approx(oracle::kV1).epsilon(1e-10));
  CHECK_FALSE(t1.estimate);
}

TEST_CASE("Example II verdicts and bounds") {
  const ProcessModel m = example2_model();
  const auto jacod = evaluate_condition(m, ConditionSpec::jacod(), SeedSpec{1});
  CHECK(jacod.verdict == Verdict::kDiverging);
  CHECK(jacod.divergence->slope == doctest::Approx(std::exp(-1.0)).epsilon(1e-3));
  CHECK(evaluate_condition(m, ConditionSpec::protter_shimbo(), SeedSpec{1}).verdict == Verdict::kDiverging);
  CHECK(evaluate_condition(m, ConditionSpec::lepingle_memin(), SeedSpec{1}).verdict == Verdict::kDiverging);
  CHECK(evaluate_condition(m, ConditionSpec::theorem1(PredictableControl::constant(0.0)), SeedSpec{1}).verdict ==
        Verdict::kDiverging);

  const double as[] = {0.25, 0.5, 0.75, 1.0};
  for (int i = 0; i < 4; ++i) {
    const auto r = evaluate_condition(m, ConditionSpec::theorem1(PredictableControl::constant(as[i])), SeedSpec{1});
    INFO("a = " << as[i]);
    CHECK(r.verdict == Verdict::kFinite);
    REQUIRE(r.quadrature);
    CHECK(*r.quadrature == doctest::Approx(oracle::kExample2Theorem1[i]).epsilon(1e-9));
    CHECK(*r.quadrature <= example2_bound(as[i]));
  }
}

TEST_CASE("Example III: constants diverge, the indicator control factorizes") {
  const ProcessModel m = example3_model();
  for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    INFO("a = " << a);
    CHECK(evaluate_condition(m, ConditionSpec::theorem1(PredictableControl::constant(a)), SeedSpec{1}).verdict ==
          Verdict::kDiverging);
  }
  const auto spec = ConditionSpec::theorem1(control_indicator_after(1.0));
  const auto r = evaluate_condition(m, spec, SeedSpec{1});
  CHECK(r.verdict == Verdict::kFinite);
  REQUIRE(r.quadrature);
  REQUIRE(m.factors.size() == 2);
  const double f0 = factor_expectation(spec, m, m.factors[0]);
  const double f1 = factor_expectation(spec, m, m.factors[1]);
  CHECK(std::fabs(*r.quadrature - f0 * f1) <= 1e-8 * f0 * f1);
  CHECK(*r.quadrature == doctest::Approx(oracle::kExample3Product).epsilon(1e-8));
  CHECK(f0 == doctest::Approx(oracle::kExample3Eta).epsilon(1e-8));
}

TEST_CASE("Monte Carlo agrees with quadrature for a bounded functional") {
  // a = 1/2 on Example II: log F is bounded above, so the estimator has
  // finite variance.
  EvaluationOptions opts;
  opts.mc_samples = 200000;
  const auto r = evaluate_condition(example2_model(), ConditionSpec::theorem1(PredictableControl::constant(0.5)),
                                    SeedSpec{7}, opts);
  REQUIRE(r.estimate);
  REQUIRE(r.quadrature);
  CHECK(std::fabs(r.estimate->mean - *r.quadrature) <= 4.0 * r.estimate->se);
  CHECK(r.stopping_time);
}

TEST_CASE("lemma1 without a reduction is Monte Carlo only") {
  EvaluationOptions opts;
  opts.mc_samples = 20000;
  const auto r = evaluate_condition(example3_model(), ConditionSpec::lemma1(), SeedSpec{2}, opts);
  CHECK(r.verdict == Verdict::kInconclusive);
  CHECK(r.estimate);
}

TEST_CASE("unsupported model and condition pairs") {
  CHECK_THROWS_AS(evaluate_condition(example1_model(), ConditionSpec::protter_shimbo(), SeedSpec{1}),
                  UnsupportedModelError);
  CHECK_THROWS_AS(evaluate_condition(example3_model(), ConditionSpec::lepingle_memin(), SeedSpec{1}),
                  UnsupportedModelError);
}

TEST_CASE("level override") {
  EvaluationOptions opts;
  opts.levels = std::vector<double>{1e-3, 1e-4, 1e-5, 1e-6};
  const auto r = evaluate_condition(example1_model(), ConditionSpec::jacod(), SeedSpec{1}, opts);
  REQUIRE(r.divergence);
  CHECK(r.divergence->levels == *opts.levels);
}

TEST_CASE("stopping-time family") {
  const auto labels = stopping_family_labels();
  CHECK(labels.size() == 5 + kMaxJumpMembers);
  JumpPath p;
  p.horizon = 1.5;
  p.jumps = {{1.0, 0.3}};
  const auto times = stopping_family_times(p);
  REQUIRE(times.size() == labels.size());
  for (double t : times) CHECK(t <= p.horizon);
  CHECK(times[0] == 0.5);
  CHECK(times[2] == 1.5);
}

TEST_CASE("report JSON fields") {
  EvaluationOptions opts;
  opts.mc_samples = 1000;
  const auto r = evaluate_condition(example2_model(), ConditionSpec::theorem1(PredictableControl::constant(0.5)),
                                    SeedSpec{3}, opts);
  const Json j = report_to_json(r);
  CHECK(j["condition"]["kind"] == "theorem1");
  CHECK(j["condition"]["control"] == "0.5");
  CHECK(j["condition"]["eps"] == 0.5);
  CHECK(j["condition"]["model"] == "example2");
  CHECK(j["condition"]["seed"] == 3);
  CHECK(j["verdict"] == "finite");
  CHECK(j["estimate"]["n"] == 1000);
  CHECK(j["estimate"].contains("mean"));
  CHECK(j["estimate"].contains("se"));
  CHECK(j["divergence"].is_null());
  CHECK(j["quadrature"].get<double>() == *r.quadrature);
  CHECK(report_json_string(r).back() == '\n');

  const auto d = evaluate_condition(example1_model(), ConditionSpec::jacod(), SeedSpec{1});
  const Json k = report_to_json(d);
  CHECK(k["estimate"].is_null());
  CHECK(k["divergence"]["model"] == "log");
  CHECK(k["divergence"]["levels"].size() == 4);
  CHECK(k["divergence"]["values"].size() == 4);
  CHECK(k["quadrature"].is_null());

  const std::string csv = report_csv(d);
  CHECK(csv.find("# verdict: diverging") != std::string::npos);
  CHECK(csv.find("level,value\n") != std::string::npos);
}
