#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "doleans/paths.hpp"

namespace doleans {

/// A pathwise exponential-type functional, kept as its natural logarithm.
struct FunctionalValue {
  double log_value = 0.0;
  /// False when the functional is +inf (log_value is then +inf or NaN).
  bool finite = true;

  double value() const;

  static FunctionalValue from_log(double log_value);
};

enum class ConditionKind { kJacod, kProtterShimbo, kLepingleMemin, kTheorem1, kLemma1 };

std::string_view to_string(ConditionKind kind);
/// Accepts "jacod", "protter_shimbo"/"protter-shimbo", "lepingle_memin"/
/// "lepingle-memin", "theorem1", "lemma1".
ConditionKind parse_condition_kind(std::string_view text);

/// Which sufficient condition to evaluate. Only theorem1 carries a control
/// and an epsilon; the factories enforce that.
class ConditionSpec {
 public:
  static constexpr double kDefaultEpsilon = 0.5;

  static ConditionSpec jacod() { return ConditionSpec(ConditionKind::kJacod); }
  static ConditionSpec protter_shimbo() { return ConditionSpec(ConditionKind::kProtterShimbo); }
  static ConditionSpec lepingle_memin() { return ConditionSpec(ConditionKind::kLepingleMemin); }
  static ConditionSpec lemma1() { return ConditionSpec(ConditionKind::kLemma1); }
  /// Throws std::invalid_argument unless 0 < eps < 1.
  static ConditionSpec theorem1(PredictableControl control, double eps = kDefaultEpsilon);

  ConditionKind kind() const { return kind_; }
  const std::optional<PredictableControl>& control() const { return control_; }
  const std::optional<double>& epsilon() const { return epsilon_; }

  /// "jacod", "theorem1[a=indicator:1,eps=0.5]", ...
  std::string describe() const;

 private:
  explicit ConditionSpec(ConditionKind kind) : kind_(kind) {}

  ConditionKind kind_;
  std::optional<PredictableControl> control_;
  std::optional<double> epsilon_;
};

/// Thrown when a condition needs compensator data the model does not carry.
class UnsupportedModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// ln(1 + x) - x / (1 + x): the per-jump Jacod term, >= 0 for x > -1.
double jacod_jump_term(double dm);

/// (1 + x) ln(1 + x) - x: the per-jump Lepingle-Memin term, >= 0.
double lepingle_memin_jump_term(double dm);

/// ln E_t(M) = M_t - <M^c>_t / 2 + sum (ln(1 + dM) - dM).
///
/// Evaluated as drift(t) - <M^c>_t / 2 + sum ln(1 + dM), which is the same
/// quantity without cancelling the (possibly huge) jump sizes against each
/// other. Throws std::invalid_argument for jumps <= -1.
double log_stoch_exponential(const JumpPath& path, double t);

/// Doleans-Dade exponential E_t(M). May underflow to 0 for huge jumps.
double stoch_exponential(const JumpPath& path, double t);

/// E_t(M) - 1 - int_0^t E_{s-}(M) dM_s, with the drift part of the integral
/// done by adaptive quadrature between jumps.
double sde_residual(const JumpPath& path, double t);

/// log of exp{<M^c>_t / 2 + sum_{s<=t} (ln(1+dM) - dM/(1+dM))}.
FunctionalValue jacod_functional(const JumpPath& path, double t);

/// log of exp{<M^c>_t / 2 + <M^d>_t}. Throws UnsupportedModelError when the
/// model has no closed-form <M^d>.
FunctionalValue protter_shimbo_functional(const ProcessModel& model, const JumpPath& path, double t);

/// A_t = <M^c>_t / 2 + sum_{s<=t} ((1+dM) ln(1+dM) - dM).
double lepingle_memin_A(const JumpPath& path, double t);

/// log of exp{B_t} for the compensator B of A. Throws UnsupportedModelError
/// when the model has no closed-form compensator.
FunctionalValue lepingle_memin_functional(const ProcessModel& model, const JumpPath& path, double t);

/// The extended condition integrand with a predictable control `a`:
///   int a dM + int (1/2 - a) d<M^c> + eps int 1{1-a<eps} d<M^c>
///   + sum [ln(1+dM) - dM/(1+dM) + ln(1+a dM) - a dM].
/// Throws std::invalid_argument unless 0 < eps < 1.
FunctionalValue theorem1_functional(const JumpPath& path, const PredictableControl& a, double eps,
                                    double t);

/// E_t(M) * (<M^c>_t / 2 + sum (ln(1+dM) - dM/(1+dM))).
double lemma1_functional(const JumpPath& path, double t);

/// Dispatches on the condition kind. lemma1 is returned as the log of its
/// (nonnegative) value.
FunctionalValue evaluate_functional(const ConditionSpec& spec, const ProcessModel& model,
                                    const JumpPath& path, double t);

}  // namespace doleans
