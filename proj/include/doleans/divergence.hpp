#pragma once

#include <functional>
#include <string_view>
#include <vector>

namespace doleans {

enum class Verdict { kFinite, kDiverging, kInconclusive };

/// How a truncated expectation is expected to grow with the truncation
/// level when the full expectation is infinite.
///   kLog:         value ~ c + slope * |ln level|   (e.g. level = delta -> 0)
///   kLinear:      value ~ c + slope * level
///   kExponential: ln value ~ c + slope * level
enum class GrowthModel { kLog, kLinear, kExponential };

std::string_view to_string(Verdict v);
std::string_view to_string(GrowthModel m);
GrowthModel parse_growth_model(std::string_view text);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y ~ intercept + slope * x. Needs >= 2 points.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Regressor of a level under a growth model.
double growth_abscissa(GrowthModel model, double level);

struct DivergenceEvidence {
  std::vector<double> levels;
  std::vector<double> values;
  GrowthModel model = GrowthModel::kLinear;
  LinearFit fit;
  bool strictly_increasing = false;
  /// The growth rate over the last pair of levels is at least half the rate
  /// over the first pair (in model coordinates). False for saturating
  /// families, whose increments decay.
  bool persistent = false;
  Verdict verdict = Verdict::kInconclusive;
};

inline constexpr double kMinDivergenceRSquared = 0.99;

/// Evaluates `family` at each level and fits the growth model.
///
/// Requires >= 4 levels whose abscissae are strictly increasing (throws
/// std::invalid_argument otherwise). Verdict is kDiverging iff the values
/// are strictly increasing and the fit has R^2 >= 0.99; otherwise
/// kInconclusive. Non-finite values make the verdict kInconclusive.
DivergenceEvidence detect_divergence(const std::function<double(double)>& family,
                                     const std::vector<double>& levels, GrowthModel model);

}  // namespace doleans
