#include "doleans/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "doleans/quadrature.hpp"

namespace doleans {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr double kQuadAbsTol = 1e-10;
constexpr double kQuadRelTol = 1e-10;

std::vector<Interval> pieces_for(const InverseCdfDistribution& dist, std::optional<double> truncation) {
  return truncation ? dist.truncated_pieces(*truncation) : dist.pieces();
}

double integrate_pieces(const std::vector<Interval>& pieces, const std::function<double(double)>& f) {
  QuadratureOptions opts;
  opts.abs_tol = kQuadAbsTol;
  opts.rel_tol = kQuadRelTol;
  double value = 0.0;
  double error = 0.0;
  bool ok = true;
  for (const Interval& p : pieces) {
    const QuadratureResult r = integrate(f, p.lower, p.upper, opts);
    value += r.value;
    error += r.error;
    ok = ok && r.converged;
  }
  if (!ok || !std::isfinite(value)) {
    throw AccuracyError("quadrature did not reach abs 1e-10 / rel 1e-10 (achieved bound " +
                            std::to_string(error) + ")",
                        error);
  }
  return value;
}

bool is_lower_law(const InverseCdfDistribution& d) { return d.improper_end() == ImproperEnd::kLower; }

double factor_log_functional(const ConditionSpec& spec, const ProcessModel& model, const ScalarFactor& factor,
                             double x) {
  const JumpPath path = factor.build(x);
  return evaluate_functional(spec, model, path, path.horizon).log_value;
}

bool reducible(const ProcessModel& model, const ConditionSpec& spec) {
  if (model.factors.empty()) return false;
  // E times a sum does not split over independent factors.
  if (spec.kind() == ConditionKind::kLemma1 && model.factors.size() > 1) return false;
  return true;
}

void require_supported(const ProcessModel& model, const ConditionSpec& spec) {
  if (spec.kind() == ConditionKind::kProtterShimbo && !model.has_disc_qv())
    throw UnsupportedModelError("protter_shimbo needs a closed-form <M^d> which model " + model.name +
                                " does not carry");
  if (spec.kind() == ConditionKind::kLepingleMemin && !model.has_lm_compensator())
    throw UnsupportedModelError("lepingle_memin needs a closed-form compensator which model " + model.name +
                                " does not carry");
}

struct FactorOutcome {
  Verdict verdict = Verdict::kInconclusive;
  std::optional<double> full;
  DivergenceEvidence evidence;
};

// Increments of the truncation family shrink: the last rate in model
// coordinates is at most half the first one, up to rounding.
bool increments_decay(const DivergenceEvidence& ev) {
  const auto& v = ev.values;
  const std::size_t k = v.size();
  if (k < 2) return false;
  double scale = 0.0;
  for (double y : v) {
    if (!std::isfinite(y)) return false;
    scale = std::max(scale, std::fabs(y));
  }
  const double x0 = growth_abscissa(ev.model, ev.levels[0]);
  const double x1 = growth_abscissa(ev.model, ev.levels[1]);
  const double xa = growth_abscissa(ev.model, ev.levels[k - 2]);
  const double xb = growth_abscissa(ev.model, ev.levels[k - 1]);
  const double first = std::fabs(v[1] - v[0]) / (x1 - x0);
  const double last = std::fabs(v[k - 1] - v[k - 2]) / (xb - xa);
  return last <= 0.5 * first + 1e-9 * scale;
}

FactorOutcome evaluate_factor(const ConditionSpec& spec, const ProcessModel& model, const ScalarFactor& factor,
                              const EvaluationOptions& options) {
  const InverseCdfDistribution& law = *factor.law;
  auto log_g = [&](double x) { return factor_log_functional(spec, model, factor, x); };

  TruncationFamily family = default_truncation(law);
  if (options.levels) family.levels = *options.levels;

  auto truncated = [&](double level) {
    try {
      return quadrature_expectation_log(law, log_g, level);
    } catch (const AccuracyError&) {
      return kNaN;
    }
  };

  FactorOutcome out;
  out.evidence = detect_divergence(truncated, family.levels, family.model);

  bool overflowed = false;
  for (double v : out.evidence.values) overflowed = overflowed || !std::isfinite(v);
  if (overflowed) {
    // Truncated values already overflow: cap the exponent instead of the
    // support and watch ln E exp(min(log F, K)) grow with K.
    auto capped = [&](double cap) {
      try {
        return quadrature_expectation_log(law, [&](double x) { return std::min(log_g(x), cap); });
      } catch (const AccuracyError&) {
        return kNaN;
      }
    };
    out.evidence = detect_divergence(capped, kExponentCaps, GrowthModel::kExponential);
  }

  try {
    out.full = quadrature_expectation_log(law, log_g);
  } catch (const AccuracyError&) {
    out.full.reset();
  }

  if (out.evidence.verdict == Verdict::kDiverging && out.evidence.persistent) {
    out.verdict = Verdict::kDiverging;
  } else if (!overflowed && out.full && increments_decay(out.evidence)) {
    out.verdict = Verdict::kFinite;
  } else {
    out.verdict = Verdict::kInconclusive;
  }
  if (out.verdict != Verdict::kDiverging && out.evidence.verdict == Verdict::kDiverging)
    out.evidence.verdict = Verdict::kInconclusive;
  return out;
}

DivergenceReport to_report(const DivergenceEvidence& ev, double scale) {
  DivergenceReport r;
  r.levels = ev.levels;
  r.model = ev.model;
  r.values = ev.values;
  for (double& v : r.values) v *= scale;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    xs.push_back(growth_abscissa(ev.model, r.levels[i]));
    ys.push_back(ev.model == GrowthModel::kExponential ? std::log(r.values[i]) : r.values[i]);
  }
  const LinearFit fit = fit_line(xs, ys);
  r.slope = fit.slope;
  r.r_squared = fit.r_squared;
  return r;
}

}  // namespace

double quadrature_expectation(const InverseCdfDistribution& dist, const std::function<double(double)>& integrand,
                              std::optional<double> truncation) {
  auto f = [&](double x) {
    const double d = dist.density(x);
    return d == 0.0 ? 0.0 : integrand(x) * d;
  };
  return integrate_pieces(pieces_for(dist, truncation), f);
}

double quadrature_expectation_log(const InverseCdfDistribution& dist,
                                  const std::function<double(double)>& log_integrand,
                                  std::optional<double> truncation) {
  auto f = [&](double x) {
    const double ld = dist.log_density(x);
    if (ld == -kInf) return 0.0;
    return std::exp(log_integrand(x) + ld);
  };
  return integrate_pieces(pieces_for(dist, truncation), f);
}

TruncationFamily default_truncation(const InverseCdfDistribution& dist) {
  if (dist.name() == "xi") return {{1e-2, 1e-3, 1e-4, 1e-5}, GrowthModel::kLog};
  if (dist.name() == "eta") return {{1e2, 1e4, 1e6, 1e8}, GrowthModel::kLog};
  if (is_lower_law(dist)) return {{1e-2, 1e-3, 1e-4, 1e-5}, GrowthModel::kLog};
  return {{10.0, 20.0, 40.0, 80.0}, GrowthModel::kLinear};
}

std::vector<std::string> stopping_family_labels() {
  std::vector<std::string> labels = {"t=0.5", "t=1", "t=2", "t=4", "horizon"};
  for (std::size_t k = 1; k <= kMaxJumpMembers; ++k) labels.push_back("jump" + std::to_string(k));
  return labels;
}

std::vector<double> stopping_family_times(const JumpPath& path) {
  const double h = path.horizon;
  std::vector<double> t = {std::min(0.5, h), std::min(1.0, h), std::min(2.0, h), std::min(4.0, h), h};
  for (std::size_t k = 0; k < kMaxJumpMembers; ++k) t.push_back(k < path.jumps.size() ? path.jumps[k].time : h);
  return t;
}

double factor_expectation(const ConditionSpec& spec, const ProcessModel& model, const ScalarFactor& factor,
                          std::optional<double> truncation) {
  require_supported(model, spec);
  return quadrature_expectation_log(
      *factor.law, [&](double x) { return factor_log_functional(spec, model, factor, x); }, truncation);
}

ConditionReport evaluate_condition(const ProcessModel& model, const ConditionSpec& spec, const SeedSpec& seeds,
                                   const EvaluationOptions& options) {
  require_supported(model, spec);

  ConditionReport report;
  report.model = model.name;
  report.condition = spec;
  report.seeds = seeds;
  report.options = options;

  const bool has_reduction = reducible(model, spec);
  if (has_reduction) {
    std::vector<FactorOutcome> outcomes;
    for (const ScalarFactor& f : model.factors) outcomes.push_back(evaluate_factor(spec, model, f, options));

    auto diverging = std::find_if(outcomes.begin(), outcomes.end(),
                                  [](const FactorOutcome& o) { return o.verdict == Verdict::kDiverging; });
    const bool all_finite = std::all_of(outcomes.begin(), outcomes.end(),
                                        [](const FactorOutcome& o) { return o.verdict == Verdict::kFinite; });
    if (diverging != outcomes.end()) {
      // The other factors are positive expectations; scale the evidence by
      // those that are known to be finite.
      double scale = 1.0;
      for (auto it = outcomes.begin(); it != outcomes.end(); ++it) {
        if (it != diverging && it->full) scale *= *it->full;
      }
      report.verdict = Verdict::kDiverging;
      report.divergence = to_report(diverging->evidence, std::isfinite(scale) ? scale : 1.0);
    } else if (all_finite) {
      double product = 1.0;
      for (const auto& o : outcomes) product *= *o.full;
      report.verdict = Verdict::kFinite;
      report.quadrature = product;
    } else {
      report.verdict = Verdict::kInconclusive;
    }
  } else {
    report.verdict = Verdict::kInconclusive;
  }

  const bool run_mc = options.mc_samples > 0 && (!has_reduction || report.verdict == Verdict::kFinite);
  if (run_mc) {
    const std::vector<std::string> labels = stopping_family_labels();
    auto functional = [&](const JumpPath& path, std::vector<double>& out) {
      const std::vector<double> times = stopping_family_times(path);
      for (std::size_t k = 0; k < times.size(); ++k) out[k] = evaluate_functional(spec, model, path, times[k]).value();
    };
    try {
      const std::vector<Estimate> est = estimate_expectations(model, functional, labels.size(), options.mc_samples, seeds);
      std::size_t best = 0;
      for (std::size_t k = 1; k < est.size(); ++k)
        if (est[k].mean > est[best].mean) best = k;
      report.estimate = est[best];
      report.stopping_time = labels[best];
    } catch (const EstimationError&) {
      report.estimate.reset();
    }
  }
  return report;
}

}  // namespace doleans
