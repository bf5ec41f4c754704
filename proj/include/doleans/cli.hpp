#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "doleans/paths.hpp"

namespace doleans::cli {

enum ExitCode : int {
  kExitOk = 0,
  /// A reproduce verdict disagreed with the expected one, or a lemma suite
  /// found a violation.
  kExitMismatch = 1,
  kExitUsage = 2,
  /// Unsupported model/condition pair, estimation or accuracy failure, I/O.
  kExitFailure = 3,
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;  ///< sample | exponential | condition | reproduce | lemmas
  std::string model = "example1";
  std::optional<std::string> kind;
  std::optional<std::string> control;  ///< --a
  std::optional<double> eps;
  std::optional<std::size_t> n;
  std::uint64_t seed = 1;
  std::optional<std::vector<double>> levels;
  std::optional<std::string> out;
  std::string format = "json";
  int which = 0;       ///< reproduce 1|2|3
  std::string mutant;  ///< lemmas: "" or "flip-indicator"
};

inline constexpr std::size_t kDefaultSamples = 100000;

/// "<constant>", "indicator:<t0>" (0 up to t0, 1 after) or
/// "piecewise:v0|b1|v1|...|bk|vk". Throws UsageError.
PredictableControl parse_control(std::string_view text);

/// Comma-separated list of numbers. Throws UsageError.
std::vector<double> parse_levels(std::string_view text);

/// Rejects flag combinations that make no sense for the command.
void validate(const RunConfig& cfg);

int cmd_sample(const RunConfig& cfg, std::ostream& out);
int cmd_exponential(const RunConfig& cfg, std::ostream& out);
int cmd_condition(const RunConfig& cfg, std::ostream& out);
int cmd_reproduce(const RunConfig& cfg, std::ostream& out);
int cmd_lemmas(const RunConfig& cfg, std::ostream& out);

/// Validates, dispatches and maps exceptions to exit codes (messages go to
/// `err`).
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace doleans::cli
