#include "doleans/divergence.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace doleans {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kFinite: return "finite";
    case Verdict::kDiverging: return "diverging";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(GrowthModel m) {
  switch (m) {
    case GrowthModel::kLog: return "log";
    case GrowthModel::kLinear: return "linear";
    case GrowthModel::kExponential: return "exponential";
  }
  return "linear";
}

GrowthModel parse_growth_model(std::string_view text) {
  if (text == "log") return GrowthModel::kLog;
  if (text == "linear") return GrowthModel::kLinear;
  if (text == "exponential") return GrowthModel::kExponential;
  throw std::invalid_argument("unknown growth model '" + std::string(text) + "'");
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LinearFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 0.0;
  return fit;
}

double growth_abscissa(GrowthModel model, double level) {
  return model == GrowthModel::kLog ? std::fabs(std::log(level)) : level;
}

DivergenceEvidence detect_divergence(const std::function<double(double)>& family,
                                     const std::vector<double>& levels, GrowthModel model) {
  if (levels.size() < 4) throw std::invalid_argument("divergence detection needs at least 4 levels");
  std::vector<double> xs;
  xs.reserve(levels.size());
  for (double level : levels) {
    if (!(level > 0.0) || !std::isfinite(level))
      throw std::invalid_argument("truncation levels must be finite and positive");
    xs.push_back(growth_abscissa(model, level));
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1]))
      throw std::invalid_argument("truncation levels must be strictly ordered towards the improper end");
  }

  DivergenceEvidence ev;
  ev.levels = levels;
  ev.model = model;
  bool all_finite = true;
  for (double level : levels) {
    const double v = family(level);
    all_finite = all_finite && std::isfinite(v);
    ev.values.push_back(v);
  }
  if (!all_finite) return ev;

  ev.strictly_increasing = true;
  for (std::size_t i = 1; i < ev.values.size(); ++i)
    ev.strictly_increasing = ev.strictly_increasing && ev.values[i] > ev.values[i - 1];

  std::vector<double> ys = ev.values;
  if (model == GrowthModel::kExponential) {
    for (double& y : ys) {
      if (!(y > 0.0)) return ev;
      y = std::log(y);
    }
  }
  ev.fit = fit_line(xs, ys);

  const std::size_t k = ys.size();
  const double first_rate = (ys[1] - ys[0]) / (xs[1] - xs[0]);
  const double last_rate = (ys[k - 1] - ys[k - 2]) / (xs[k - 1] - xs[k - 2]);
  ev.persistent = first_rate > 0.0 && last_rate >= 0.5 * first_rate;

  if (ev.strictly_increasing && ev.fit.r_squared >= kMinDivergenceRSquared) ev.verdict = Verdict::kDiverging;
  return ev;
}

}  // namespace doleans
