#include "doleans/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace doleans {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Mass of the bounded branch of the eta law.
constexpr double kEtaLowerMass = 7.0 / 8.0;

}  // namespace

InverseCdfDistribution::InverseCdfDistribution(std::string name, std::vector<Interval> pieces,
                                               ImproperEnd improper_end, ScalarFn density,
                                               ScalarFn cdf, ScalarFn inverse_cdf, ScalarFn log_density)
    : name_(std::move(name)),
      pieces_(std::move(pieces)),
      improper_end_(improper_end),
      density_(std::move(density)),
      cdf_(std::move(cdf)),
      inverse_cdf_(std::move(inverse_cdf)),
      log_density_(std::move(log_density)) {
  if (pieces_.empty()) throw std::invalid_argument("distribution needs a non-empty support");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (!(pieces_[i].lower < pieces_[i].upper))
      throw std::invalid_argument("support piece must have lower < upper");
    if (i > 0 && pieces_[i].lower < pieces_[i - 1].upper)
      throw std::invalid_argument("support pieces must be ordered and disjoint");
  }
}

double InverseCdfDistribution::log_density(double x) const {
  if (log_density_) return log_density_(x);
  return std::log(density_(x));
}

std::vector<Interval> InverseCdfDistribution::truncated_pieces(double level) const {
  std::vector<Interval> out;
  if (improper_end_ == ImproperEnd::kLower) {
    if (!(level > 0.0)) throw std::invalid_argument("lower truncation distance must be positive");
    const double cut = support_lower() + level;
    for (const auto& p : pieces_) {
      if (p.upper <= cut) continue;
      out.push_back({std::max(p.lower, cut), p.upper});
    }
  } else {
    const double cut = level;
    for (const auto& p : pieces_) {
      if (p.lower >= cut) continue;
      out.push_back({p.lower, std::min(p.upper, cut)});
    }
  }
  if (out.empty()) throw std::invalid_argument("truncation level removes the whole support");
  return out;
}

InverseCdfDistribution make_xi_distribution() {
  auto density = [](double x) {
    if (x <= -1.0 || x >= 1.0) return 0.0;
    if (x <= 0.0) {
      const double s = 1.0 + x;
      return std::exp(x / s) / (2.0 * s * s);
    }
    const double s = 1.0 - x;
    return std::exp(-x / s) / (2.0 * s * s);
  };
  auto log_density = [](double x) {
    if (x <= -1.0 || x >= 1.0) return -kInf;
    const double s = x <= 0.0 ? 1.0 + x : 1.0 - x;
    return -std::fabs(x) / s - std::log(2.0 * s * s);
  };
  auto cdf = [](double x) {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (x <= 0.0) return 0.5 * std::exp(x / (1.0 + x));
    return 1.0 - 0.5 * std::exp(-x / (1.0 - x));
  };
  // Each branch of the CDF is 1/2 exp(y) with y a Moebius map of x.
  auto inverse_cdf = [](double u) {
    if (u <= 0.5) {
      const double y = std::log(2.0 * u);
      return y / (1.0 - y);
    }
    const double z = std::log(2.0 * (1.0 - u));
    return -z / (1.0 - z);
  };
  return InverseCdfDistribution("xi", {{-1.0, 0.0}, {0.0, 1.0}}, ImproperEnd::kLower, density,
                                cdf, inverse_cdf, log_density);
}

InverseCdfDistribution make_eta_distribution() {
  auto density = [](double x) {
    if (x >= -0.5 && x <= 0.0) return 1.0 - 3.0 * x;
    if (x >= 1.0) return 0.25 / (x * x * x);
    return 0.0;
  };
  auto cdf = [](double x) {
    if (x < -0.5) return 0.0;
    if (x <= 0.0) return x - 1.5 * x * x + kEtaLowerMass;
    if (x < 1.0) return kEtaLowerMass;
    return 1.0 - 0.125 / (x * x);
  };
  auto inverse_cdf = [](double u) {
    if (u >= kEtaLowerMass) return 1.0 / std::sqrt(8.0 * (1.0 - u));
    // Root in [-1/2, 0] of 1.5 x^2 - x + c = 0, c = u - 7/8 <= 0, written
    // without the 1 - sqrt(...) cancellation.
    const double c = u - kEtaLowerMass;
    return 2.0 * c / (1.0 + std::sqrt(1.0 - 6.0 * c));
  };
  return InverseCdfDistribution("eta", {{-0.5, 0.0}, {1.0, kInf}}, ImproperEnd::kUpper, density,
                                cdf, inverse_cdf);
}

InverseCdfDistribution make_first_jump_time() {
  auto density = [](double x) { return x < 0.0 ? 0.0 : std::exp(-x); };
  auto log_density = [](double x) { return x < 0.0 ? -kInf : -x; };
  auto cdf = [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); };
  auto inverse_cdf = [](double u) { return -std::log1p(-u); };
  return InverseCdfDistribution("first_jump_time", {{0.0, kInf}}, ImproperEnd::kUpper, density,
                                cdf, inverse_cdf, log_density);
}

double sample(const InverseCdfDistribution& dist, double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("sample: u must lie in (0, 1)");
  return dist.inverse_cdf(u);
}

}  // namespace doleans
