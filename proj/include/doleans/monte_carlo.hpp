#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "doleans/paths.hpp"

namespace doleans {

/// Path j of an experiment always draws from stream j of `seed`. `streams`
/// only fixes how the n paths are cut into contiguous blocks for the
/// reduction, so equal SeedSpecs give bit-identical results whatever the
/// number of worker threads.
struct SeedSpec {
  std::uint64_t seed = 0;
  std::uint64_t streams = 64;
};

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;  ///< finite samples used
  std::size_t non_finite = 0;
  /// Paths whose horizon hit the sampler's overflow cap.
  std::size_t capped = 0;
};

/// More than 0.1% of the sampled functional values were inf or NaN.
class EstimationError : public std::runtime_error {
 public:
  EstimationError(const std::string& what, std::size_t non_finite, std::size_t n)
      : std::runtime_error(what), non_finite(non_finite), n(n) {}
  std::size_t non_finite;
  std::size_t n;
};

inline constexpr double kMaxNonFiniteFraction = 1e-3;

/// Streaming mean/variance with Chan's pairwise merge.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Worker count: DOLEANS_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
unsigned worker_count();

using ScalarPathFunctional = std::function<double(const JumpPath&)>;
using VectorPathFunctional = std::function<void(const JumpPath&, std::vector<double>&)>;

/// Sample mean and standard error of functional(path) over paths 0..n-1.
/// Throws std::invalid_argument for n < 2 or streams == 0, EstimationError
/// when too many values are non-finite.
Estimate estimate_expectation(const ProcessModel& model, const ScalarPathFunctional& functional,
                              std::size_t n, const SeedSpec& seeds);

/// Several functionals of the same paths at once; `functional` fills
/// exactly `width` values per path. Non-finite values are handled per
/// component; EstimationError is thrown if any component exceeds the limit.
std::vector<Estimate> estimate_expectations(const ProcessModel& model, const VectorPathFunctional& functional,
                                            std::size_t width, std::size_t n, const SeedSpec& seeds);

}  // namespace doleans
