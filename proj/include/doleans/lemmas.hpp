#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

namespace doleans {

inline constexpr double kLemmaSlack = 1e-12;

struct LemmaSuiteResult {
  std::string name;
  std::size_t samples = 0;
  double min_value = 0.0;
  /// Arguments at the minimum.
  double arg1 = 0.0;
  double arg2 = 0.0;
  /// First sample below -kLemmaSlack, if any.
  std::optional<std::pair<double, double>> violation;
  double violation_value = 0.0;

  bool passed() const { return !violation; }
};

using Lemma2Fn = std::function<double(double x, double eps)>;

/// lemma2_lhs with the indicator condition reversed; used to show that the
/// suite catches a wrong implementation.
double lemma2_flipped_indicator(double x, double eps);

/// grid x grid points (x from 0 to 1 inclusive, eps at cell midpoints of
/// (0, 1)) plus `random` uniform pairs.
LemmaSuiteResult run_lemma2_suite(const Lemma2Fn& f, std::uint64_t seed, std::size_t grid = 1000,
                                  std::size_t random = 100000);

/// Maps u in (0, 1) to a jump dm with 1 + dm log-uniform on (1e-9, 1 + 1e6).
double draw_log_uniform_jump(double u);

LemmaSuiteResult run_lemma3_suite(std::uint64_t seed, std::size_t random = 100000);

/// jump_reduction_gap(a, dm) >= 0: scaling a jump by a in [0, 1] shrinks
/// the Jacod term.
LemmaSuiteResult run_reduction_suite(std::uint64_t seed, std::size_t random = 100000);

/// One human-readable line per suite.
std::string describe(const LemmaSuiteResult& r);

}  // namespace doleans
