#include "doleans/girsanov.hpp"

#include <cmath>
#include <stdexcept>

#include "doleans/stochexp.hpp"

namespace doleans {

MeasureChangeDecomposition decompose(const JumpPath& path, const PredictableControl& a) {
  validate(path);
  const double T = path.horizon;
  MeasureChangeDecomposition d;

  // Density E_T(int a dM), written with the jump part of int a dM folded
  // into the log1p terms.
  const double a_sq_qv = integrate_against_cont_qv(path, a, T, [](double v) { return v * v; });
  double log_density = integrate_control_drift(path, a, T) - 0.5 * a_sq_qv;

  // N~ = int (1-a) dM - [jump correction] - int a(1-a) d<M^c>.
  const PredictableControl one_minus_a = a.complement();
  const double cross_qv = integrate_against_cont_qv(path, a, T, [](double v) { return v * (1.0 - v); });
  const double rest_sq_qv = integrate_against_cont_qv(path, a, T, [](double v) { return (1.0 - v) * (1.0 - v); });
  double jump_correction = 0.0;
  double log_transformed = integrate_control_drift(path, one_minus_a, T) - cross_qv - 0.5 * rest_sq_qv;

  for (const auto& j : path.jumps) {
    const double aj = a.value_at(j.time);
    const double scaled = aj * j.size;
    log_density += std::log1p(scaled);
    const double tilde = (1.0 - aj) * j.size / (1.0 + scaled);
    d.transformed_jumps.push_back({j.time, tilde});
    jump_correction += aj * (1.0 - aj) * j.size * (j.size / (1.0 + scaled));
    log_transformed += std::log1p(tilde);
  }

  d.transformed_terminal_value = integrate_control(path, one_minus_a, T) - jump_correction - cross_qv;
  d.log_density_factor = log_density;
  d.log_transformed_exponential = log_transformed;
  d.log_product = log_density + log_transformed;
  d.density_factor = std::exp(log_density);
  d.transformed_exponential = std::exp(log_transformed);
  d.product = std::exp(d.log_product);
  return d;
}

double product_identity_residual(const JumpPath& path, const PredictableControl& a) {
  const MeasureChangeDecomposition d = decompose(path, a);
  const double log_e = log_stoch_exponential(path, path.horizon);
  const double e = std::exp(log_e);
  if (e == 0.0) return 0.0;
  return e * std::expm1(d.log_product - log_e);
}

double transformed_jacod_integrand(const JumpPath& path, const PredictableControl& a, double t) {
  validate(path);
  double log_value =
      0.5 * integrate_against_cont_qv(path, a, t, [](double v) { return (1.0 - v) * (1.0 - v); });
  for (const auto& j : path.jumps) {
    if (j.time > t) break;
    const double aj = a.value_at(j.time);
    log_value += std::log1p(j.size) - std::log1p(aj * j.size) - (1.0 - aj) * j.size / (1.0 + j.size);
  }
  return log_value;
}

double lemma2_lhs(double x, double eps) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("lemma2_lhs: x must lie in [0, 1]");
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("lemma2_lhs: eps must lie in (0, 1)");
  const double boost = (1.0 - x < eps) ? 2.0 * eps : 0.0;
  return (1.0 - eps * eps) * x * x - 2.0 * x + 1.0 + boost;
}

double lemma3_gap(double a, double dm) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::domain_error("lemma3_gap: a must lie in [0, 1]");
  if (!(dm > -1.0)) throw std::domain_error("lemma3_gap: dm must exceed -1");
  // (1-a) dm/(1+dm) - dm/(1+dm) collapses to -a dm/(1+dm).
  return std::log1p(a * dm) - a * dm / (1.0 + dm);
}

double jump_reduction_gap(double a, double dm) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::domain_error("jump_reduction_gap: a must lie in [0, 1]");
  if (!(dm > -1.0)) throw std::domain_error("jump_reduction_gap: dm must exceed -1");
  return jacod_jump_term(dm) - jacod_jump_term(a * dm);
}

}  // namespace doleans
