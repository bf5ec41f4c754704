#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "doleans/distributions.hpp"
#include "doleans/divergence.hpp"
#include "doleans/monte_carlo.hpp"
#include "doleans/stochexp.hpp"

namespace doleans {

/// Adaptive quadrature did not reach the requested tolerance.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved) : std::runtime_error(what), achieved_bound(achieved) {}
  double achieved_bound;
};

/// int integrand(x) f(x) dx over the support of `dist`, or over the support
/// truncated at `truncation` (see InverseCdfDistribution::truncated_pieces).
/// Points where the density is 0 contribute 0 even if the integrand is
/// infinite there. Throws AccuracyError when the bound abs 1e-10 or rel
/// 1e-10 is not met.
double quadrature_expectation(const InverseCdfDistribution& dist, const std::function<double(double)>& integrand,
                              std::optional<double> truncation = std::nullopt);

/// Same with the integrand given as a logarithm, so that exp(log g) * f is
/// formed as exp(log g + log f) without overflowing first.
double quadrature_expectation_log(const InverseCdfDistribution& dist,
                                  const std::function<double(double)>& log_integrand,
                                  std::optional<double> truncation = std::nullopt);

struct TruncationFamily {
  std::vector<double> levels;
  GrowthModel model = GrowthModel::kLinear;
};

/// Default levels by law: xi -> delta in {1e-2..1e-5} (log), eta -> R in
/// {1e2..1e8} (log), exponential -> T in {10, 20, 40, 80} (linear).
TruncationFamily default_truncation(const InverseCdfDistribution& dist);

/// Caps for the exponent-capped family used when truncated values overflow.
inline const std::vector<double> kExponentCaps = {10.0, 20.0, 40.0, 80.0};

struct EvaluationOptions {
  /// Overrides the default truncation levels of every factor.
  std::optional<std::vector<double>> levels;
  /// Monte Carlo sample count; 0 disables the Monte Carlo cross-check.
  std::size_t mc_samples = 0;
};

struct DivergenceReport {
  std::vector<double> levels;
  std::vector<double> values;
  double slope = 0.0;
  GrowthModel model = GrowthModel::kLinear;
  double r_squared = 0.0;
};

struct ConditionReport {
  std::string model;
  ConditionSpec condition = ConditionSpec::jacod();
  SeedSpec seeds;
  EvaluationOptions options;
  Verdict verdict = Verdict::kInconclusive;
  std::optional<Estimate> estimate;
  std::optional<DivergenceReport> divergence;
  std::optional<double> quadrature;
  /// Which member of the stopping-time family gave the reported estimate.
  std::optional<std::string> stopping_time;
};

/// Stopping-time family used by Monte Carlo: fixed times {0.5, 1, 2, 4},
/// the horizon, and the first kMaxJumpMembers jump times (the horizon when a
/// path has fewer jumps). All are capped at the horizon.
inline constexpr std::size_t kMaxJumpMembers = 4;
std::vector<std::string> stopping_family_labels();
std::vector<double> stopping_family_times(const JumpPath& path);

/// Runs the quadrature reduction over the model's scalar factors when one
/// exists, with divergence detection on truncation families, and a Monte
/// Carlo estimate when requested (or when there is no reduction). Throws
/// UnsupportedModelError for condition/model pairs missing compensators.
ConditionReport evaluate_condition(const ProcessModel& model, const ConditionSpec& spec, const SeedSpec& seeds,
                                   const EvaluationOptions& options = {});

/// E exp(log F) for a single factor of a model at the factor path horizon,
/// over the full support. Throws AccuracyError on non-convergence.
double factor_expectation(const ConditionSpec& spec, const ProcessModel& model, const ScalarFactor& factor,
                          std::optional<double> truncation = std::nullopt);

}  // namespace doleans
