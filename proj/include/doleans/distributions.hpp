#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace doleans {

/// One connected piece of a support. Endpoints may be infinite.
struct Interval {
  double lower;
  double upper;
};

/// Which endpoint of the support makes expectations improper (a density
/// singularity or an unbounded tail). Truncation families cut there.
enum class ImproperEnd { kLower, kUpper };

/// A scalar law given by density, CDF and a closed-form inverse CDF.
///
/// The support is a union of disjoint pieces in increasing order; the CDF is
/// flat across gaps between pieces. Instances are immutable.
class InverseCdfDistribution {
 public:
  using ScalarFn = std::function<double(double)>;

  InverseCdfDistribution(std::string name, std::vector<Interval> pieces,
                         ImproperEnd improper_end, ScalarFn density,
                         ScalarFn cdf, ScalarFn inverse_cdf, ScalarFn log_density = {});

  const std::string& name() const { return name_; }
  const std::vector<Interval>& pieces() const { return pieces_; }
  ImproperEnd improper_end() const { return improper_end_; }

  double support_lower() const { return pieces_.front().lower; }
  double support_upper() const { return pieces_.back().upper; }

  double density(double x) const { return density_(x); }
  /// ln f(x), -inf off the support. Stays finite where f underflows when
  /// the law supplies a closed form.
  double log_density(double x) const;
  double cdf(double x) const { return cdf_(x); }
  double inverse_cdf(double u) const { return inverse_cdf_(u); }

  /// Support pieces with the improper end cut off.
  ///
  /// For a lower improper end the level is a distance `delta > 0` and the
  /// support starts at `lower + delta`. For an upper improper end the level
  /// is the absolute cut point. Pieces entirely outside are dropped.
  std::vector<Interval> truncated_pieces(double level) const;

 private:
  std::string name_;
  std::vector<Interval> pieces_;
  ImproperEnd improper_end_;
  ScalarFn density_;
  ScalarFn cdf_;
  ScalarFn inverse_cdf_;
  ScalarFn log_density_;
};

/// Law of the single jump in the one-jump discrete martingale: support
/// (-1, 1), zero mean, density singular-like mass near -1.
InverseCdfDistribution make_xi_distribution();

/// Heavy-tailed zero-mean law on [-1/2, 0] u [1, inf) with infinite variance.
InverseCdfDistribution make_eta_distribution();

/// Unit-rate exponential law of the first jump of a standard Poisson process.
InverseCdfDistribution make_first_jump_time();

/// Inverse-transform sample. Throws std::domain_error unless 0 < u < 1.
double sample(const InverseCdfDistribution& dist, double u);

}  // namespace doleans
