#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "doleans/distributions.hpp"

namespace doleans {

struct Jump {
  double time;
  double size;

  friend bool operator==(const Jump&, const Jump&) = default;
};

/// Continuous finite-variation part of a path, in closed form.
///
/// kCompensatedExp is the compensator of a Poisson integral of e^{s - start}
/// started at `start` and stopped at the path horizon:
///   drift(t) = -(e^{(t ^ T) - start} - 1) for t >= start, 0 before.
class Drift {
 public:
  enum class Kind { kNone, kCompensatedExp };

  Drift() = default;
  static Drift none() { return Drift(); }
  static Drift compensated_exp(double start);

  Kind kind() const { return kind_; }
  double start() const { return start_; }

  double value(double t, double horizon) const;
  /// Time derivative; zero after the horizon.
  double rate(double t, double horizon) const;

  /// Serialized form: "none" or "compensated_exp:<start>".
  std::string tag() const;
  static Drift parse(std::string_view tag);

  friend bool operator==(const Drift&, const Drift&) = default;

 private:
  Kind kind_ = Kind::kNone;
  double start_ = 0.0;
};

/// t -> <M^c>_t. Stopped at the horizon.
class ContinuousQv {
 public:
  enum class Kind { kZero, kLinear };

  ContinuousQv() = default;
  static ContinuousQv zero() { return ContinuousQv(); }
  static ContinuousQv linear(double rate);

  Kind kind() const { return kind_; }
  double rate() const { return rate_; }
  double value(double t, double horizon) const;

  /// Serialized form: "zero" or "linear:<rate>".
  std::string tag() const;
  static ContinuousQv parse(std::string_view tag);

  friend bool operator==(const ContinuousQv&, const ContinuousQv&) = default;

 private:
  Kind kind_ = Kind::kZero;
  double rate_ = 0.0;
};

/// One realized cadlag trajectory of a finite-activity jump local martingale,
/// observed up to its (realized) stopping horizon.
///
/// value_at(t) = drift(t) + sum of jumps with time <= t. The continuous
/// martingale part is not simulated; only its quadratic variation is carried.
struct JumpPath {
  double horizon = 0.0;
  std::vector<Jump> jumps;
  Drift drift;
  ContinuousQv cont_qv;
  /// Set by samplers whose horizon hit the overflow cap.
  bool capped = false;

  double value_at(double t) const;
  double drift_at(double t) const { return drift.value(t, horizon); }
  double cont_qv_at(double t) const { return cont_qv.value(t, horizon); }
  /// Sum of jump sizes at times <= t.
  double jump_sum(double t) const;
  /// Number of jumps at times <= t.
  std::size_t jumps_until(double t) const;

  friend bool operator==(const JumpPath&, const JumpPath&) = default;
};

/// Throws std::invalid_argument when a path breaks its invariants: jump
/// sizes > -1, strictly increasing jump times in (0, horizon], finite values.
void validate(const JumpPath& path);

/// Left-continuous piecewise-constant process with values in [0, 1].
///
/// With breaks b_1 < ... < b_k the value is values[0] on [0, b_1],
/// values[i] on (b_i, b_{i+1}] and values[k] on (b_k, inf). A jump at
/// time t therefore sees the left limit of the control.
class PredictableControl {
 public:
  struct Segment {
    double begin;
    double end;
    double value;
  };

  static PredictableControl constant(double a);
  static PredictableControl from_segments(std::vector<double> breaks, std::vector<double> values);

  double value_at(double t) const;
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }
  bool is_constant() const { return breaks_.empty(); }

  /// The constant pieces covering [0, t_end], in time order.
  std::vector<Segment> segments(double t_end) const;

  /// 1 - a.
  PredictableControl complement() const;

  /// Short human-readable form ("0.5", "indicator:1", or "piecewise:...").
  std::string describe() const;

  friend bool operator==(const PredictableControl&, const PredictableControl&) = default;

 private:
  PredictableControl(std::vector<double> breaks, std::vector<double> values);

  std::vector<double> breaks_;
  std::vector<double> values_;
};

/// 0 on [0, t0], 1 on (t0, inf).
PredictableControl control_indicator_after(double t0);

/// alpha * a + (1 - alpha) * b on the merged breakpoints. alpha in [0, 1].
PredictableControl mix(const PredictableControl& a, const PredictableControl& b, double alpha);

/// Stochastic integral int_0^t a_s dM_s along a path: jumps weighted by the
/// control at the jump time plus the drift integral, exact per segment.
double integrate_control(const JumpPath& path, const PredictableControl& a, double t);

/// Drift part of integrate_control alone: sum over control segments of
/// a * (drift(end) - drift(begin)).
double integrate_control_drift(const JumpPath& path, const PredictableControl& a, double t);

/// int_0^t a_s d<M^c>_s style integral of a piecewise-constant weight
/// against the continuous quadratic variation. `weight` maps a control
/// value to the integrand.
double integrate_against_cont_qv(const JumpPath& path, const PredictableControl& a, double t,
                                 const std::function<double(double)>& weight);

/// A scalar random driver of a model together with the (deterministic) path
/// it produces. Path functionals that are additive over jumps and drift
/// pieces factorize over independent drivers.
struct ScalarFactor {
  std::shared_ptr<const InverseCdfDistribution> law;
  std::function<JumpPath(double)> build;
};

using PathFunction = std::function<double(const JumpPath&, double)>;

/// A law on paths: sampler plus optional closed-form compensator data.
struct ProcessModel {
  std::string name;
  std::string description;
  /// Deterministic in (seed, stream index).
  std::function<JumpPath(std::uint64_t, std::uint64_t)> sampler;
  /// Predictable quadratic variation of the purely discontinuous part.
  PathFunction disc_qv;
  /// Compensator B of the Lepingle-Memin process A.
  PathFunction lm_compensator;
  /// Independent scalar drivers; the path is the superposition of the
  /// factor paths.
  std::vector<ScalarFactor> factors;

  JumpPath sample(std::uint64_t seed, std::uint64_t stream) const { return sampler(seed, stream); }
  bool has_disc_qv() const { return static_cast<bool>(disc_qv); }
  bool has_lm_compensator() const { return static_cast<bool>(lm_compensator); }
};

/// Default overflow guard for exponential jump sizes e^{tau}.
inline constexpr double kDefaultMaxJumpTime = 700.0;

/// M_t = xi 1{t >= 1}.
ProcessModel example1_model();

/// M_t = int_0^t e^s dN_{s ^ tau_1} for a compensated unit Poisson process N.
ProcessModel example2_model(double max_jump_time = kDefaultMaxJumpTime);

/// M = eta 1{t >= 1} + int_1^t e^{s-1} dN^_{s ^ tau^_1}, eta independent of
/// the Poisson process restarted at time 1.
ProcessModel example3_model(double max_jump_time = kDefaultMaxJumpTime);

/// Looks up "example1" / "example2" / "example3". Throws on unknown names.
ProcessModel model_by_name(std::string_view name);

}  // namespace doleans
