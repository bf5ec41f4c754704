#include "doleans/stochexp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "doleans/quadrature.hpp"
#include "doleans/text.hpp"

namespace doleans {

namespace {

void require_jumps_above_minus_one(const JumpPath& path) {
  for (const auto& j : path.jumps) {
    if (!(j.size > -1.0)) throw std::invalid_argument("stochastic exponential needs every jump > -1");
  }
}

void require_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie strictly inside (0, 1)");
}

// ln E at t, counting only jumps strictly before `t` when `left_limit`.
double log_exponential_impl(const JumpPath& path, double t, bool left_limit) {
  double log_e = path.drift_at(t) - 0.5 * path.cont_qv_at(t);
  for (const auto& j : path.jumps) {
    if (j.time > t || (left_limit && j.time == t)) break;
    log_e += std::log1p(j.size);
  }
  return log_e;
}

}  // namespace

double FunctionalValue::value() const { return std::exp(log_value); }

FunctionalValue FunctionalValue::from_log(double log_value) {
  return {log_value, !(std::isnan(log_value) || log_value == std::numeric_limits<double>::infinity())};
}

std::string_view to_string(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::kJacod: return "jacod";
    case ConditionKind::kProtterShimbo: return "protter_shimbo";
    case ConditionKind::kLepingleMemin: return "lepingle_memin";
    case ConditionKind::kTheorem1: return "theorem1";
    case ConditionKind::kLemma1: return "lemma1";
  }
  return "unknown";
}

ConditionKind parse_condition_kind(std::string_view text) {
  if (text == "jacod") return ConditionKind::kJacod;
  if (text == "protter_shimbo" || text == "protter-shimbo") return ConditionKind::kProtterShimbo;
  if (text == "lepingle_memin" || text == "lepingle-memin") return ConditionKind::kLepingleMemin;
  if (text == "theorem1") return ConditionKind::kTheorem1;
  if (text == "lemma1") return ConditionKind::kLemma1;
  throw std::invalid_argument("unknown condition kind '" + std::string(text) + "'");
}

ConditionSpec ConditionSpec::theorem1(PredictableControl control, double eps) {
  require_epsilon(eps);
  ConditionSpec spec(ConditionKind::kTheorem1);
  spec.control_ = std::move(control);
  spec.epsilon_ = eps;
  return spec;
}

std::string ConditionSpec::describe() const {
  std::string out(to_string(kind_));
  if (kind_ == ConditionKind::kTheorem1)
    out += "[a=" + control_->describe() + ",eps=" + format_double(*epsilon_) + "]";
  return out;
}

double jacod_jump_term(double dm) { return std::log1p(dm) - dm / (1.0 + dm); }

double lepingle_memin_jump_term(double dm) { return (1.0 + dm) * std::log1p(dm) - dm; }

double log_stoch_exponential(const JumpPath& path, double t) {
  require_jumps_above_minus_one(path);
  return log_exponential_impl(path, t, false);
}

double stoch_exponential(const JumpPath& path, double t) { return std::exp(log_stoch_exponential(path, t)); }

double sde_residual(const JumpPath& path, double t) {
  require_jumps_above_minus_one(path);
  const double e_t = std::exp(log_exponential_impl(path, t, false));

  double integral = 0.0;
  for (const auto& j : path.jumps) {
    if (j.time > t) break;
    integral += std::exp(log_exponential_impl(path, j.time, true)) * j.size;
  }

  if (path.drift.kind() != Drift::Kind::kNone) {
    QuadratureOptions opts;
    opts.abs_tol = 1e-14;
    opts.rel_tol = 1e-13;
    auto integrand = [&](double s) {
      const double rate = path.drift.rate(s, path.horizon);
      if (rate == 0.0) return 0.0;
      return std::exp(log_exponential_impl(path, s, false)) * rate;
    };
    // Between consecutive jumps the integrand is smooth.
    double left = 0.0;
    for (const auto& j : path.jumps) {
      if (j.time > t) break;
      integral += integrate(integrand, left, j.time, opts).value;
      left = j.time;
    }
    if (t > left) integral += integrate(integrand, left, t, opts).value;
  }
  return e_t - 1.0 - integral;
}

FunctionalValue jacod_functional(const JumpPath& path, double t) {
  require_jumps_above_minus_one(path);
  double log_value = 0.5 * path.cont_qv_at(t);
  for (const auto& j : path.jumps) {
    if (j.time > t) break;
    log_value += jacod_jump_term(j.size);
  }
  return FunctionalValue::from_log(log_value);
}

FunctionalValue protter_shimbo_functional(const ProcessModel& model, const JumpPath& path, double t) {
  if (!model.has_disc_qv())
    throw UnsupportedModelError("model '" + model.name + "' has no closed-form <M^d>");
  return FunctionalValue::from_log(0.5 * path.cont_qv_at(t) + model.disc_qv(path, t));
}

double lepingle_memin_A(const JumpPath& path, double t) {
  require_jumps_above_minus_one(path);
  double a = 0.5 * path.cont_qv_at(t);
  for (const auto& j : path.jumps) {
    if (j.time > t) break;
    a += lepingle_memin_jump_term(j.size);
  }
  return a;
}

FunctionalValue lepingle_memin_functional(const ProcessModel& model, const JumpPath& path, double t) {
  if (!model.has_lm_compensator())
    throw UnsupportedModelError("model '" + model.name + "' has no closed-form Lepingle-Memin compensator");
  return FunctionalValue::from_log(model.lm_compensator(path, t));
}

FunctionalValue theorem1_functional(const JumpPath& path, const PredictableControl& a, double eps,
                                    double t) {
  require_epsilon(eps);
  require_jumps_above_minus_one(path);
  // Accumulation order mirrors jacod_functional so that a == 0 reproduces it
  // bit for bit.
  double log_value = integrate_control(path, a, t);
  log_value += integrate_against_cont_qv(path, a, t, [](double v) { return 0.5 - v; });
  log_value += eps * integrate_against_cont_qv(path, a, t,
                                               [eps](double v) { return 1.0 - v < eps ? 1.0 : 0.0; });
  for (const auto& j : path.jumps) {
    if (j.time > t) break;
    const double aj = a.value_at(j.time) * j.size;
    log_value += jacod_jump_term(j.size) + (std::log1p(aj) - aj);
  }
  return FunctionalValue::from_log(log_value);
}

double lemma1_functional(const JumpPath& path, double t) {
  const double bracket = jacod_functional(path, t).log_value;
  return stoch_exponential(path, t) * bracket;
}

FunctionalValue evaluate_functional(const ConditionSpec& spec, const ProcessModel& model,
                                    const JumpPath& path, double t) {
  switch (spec.kind()) {
    case ConditionKind::kJacod: return jacod_functional(path, t);
    case ConditionKind::kProtterShimbo: return protter_shimbo_functional(model, path, t);
    case ConditionKind::kLepingleMemin: return lepingle_memin_functional(model, path, t);
    case ConditionKind::kTheorem1: return theorem1_functional(path, *spec.control(), *spec.epsilon(), t);
    case ConditionKind::kLemma1: {
      const double bracket = jacod_functional(path, t).log_value;
      return FunctionalValue::from_log(log_stoch_exponential(path, t) + std::log(bracket));
    }
  }
  throw std::logic_error("unhandled condition kind");
}

}  // namespace doleans
