#include "doleans/lemmas.hpp"

#include <cmath>
#include <limits>

#include "doleans/girsanov.hpp"
#include "doleans/rng.hpp"
#include "doleans/text.hpp"

namespace doleans {

namespace {

class Tracker {
 public:
  explicit Tracker(std::string name) { r_.name = std::move(name); r_.min_value = std::numeric_limits<double>::infinity(); }

  void observe(double a1, double a2, double v) {
    ++r_.samples;
    if (v < r_.min_value || std::isnan(v)) {
      r_.min_value = v;
      r_.arg1 = a1;
      r_.arg2 = a2;
    }
    if (!r_.violation && !(v >= -kLemmaSlack)) {
      r_.violation = std::make_pair(a1, a2);
      r_.violation_value = v;
    }
  }

  LemmaSuiteResult result() const { return r_; }

 private:
  LemmaSuiteResult r_;
};

}  // namespace

double lemma2_flipped_indicator(double x, double eps) {
  const double boost = (1.0 - x >= eps) ? 2.0 * eps : 0.0;
  return (1.0 - eps * eps) * x * x - 2.0 * x + 1.0 + boost;
}

LemmaSuiteResult run_lemma2_suite(const Lemma2Fn& f, std::uint64_t seed, std::size_t grid, std::size_t random) {
  Tracker t("lemma2");
  for (std::size_t i = 0; i < grid; ++i) {
    const double x = grid > 1 ? static_cast<double>(i) / static_cast<double>(grid - 1) : 0.0;
    for (std::size_t j = 0; j < grid; ++j) {
      const double eps = (static_cast<double>(j) + 0.5) / static_cast<double>(grid);
      t.observe(x, eps, f(x, eps));
    }
  }
  StreamRng rng(seed, 0);
  for (std::size_t k = 0; k < random; ++k) {
    const double x = rng.next_open_unit();
    const double eps = rng.next_open_unit();
    t.observe(x, eps, f(x, eps));
  }
  return t.result();
}

double draw_log_uniform_jump(double u) {
  static const double lo = std::log(1e-9);
  static const double hi = std::log1p(1e6);
  // 1 + dm = exp(lo + u (hi - lo)); expm1 keeps small jumps accurate.
  return std::expm1(lo + u * (hi - lo));
}

LemmaSuiteResult run_lemma3_suite(std::uint64_t seed, std::size_t random) {
  Tracker t("lemma3");
  StreamRng rng(seed, 1);
  for (std::size_t k = 0; k < random; ++k) {
    const double a = rng.next_open_unit();
    const double dm = draw_log_uniform_jump(rng.next_open_unit());
    t.observe(a, dm, lemma3_gap(a, dm));
  }
  return t.result();
}

LemmaSuiteResult run_reduction_suite(std::uint64_t seed, std::size_t random) {
  Tracker t("jump_reduction");
  StreamRng rng(seed, 2);
  for (std::size_t k = 0; k < random; ++k) {
    const double a = rng.next_open_unit();
    const double dm = draw_log_uniform_jump(rng.next_open_unit());
    t.observe(a, dm, jump_reduction_gap(a, dm));
  }
  return t.result();
}

std::string describe(const LemmaSuiteResult& r) {
  std::string line = r.name + ": " + std::to_string(r.samples) + " samples, min " + format_double(r.min_value) +
                     " at (" + format_double(r.arg1) + ", " + format_double(r.arg2) + ")";
  if (r.violation) {
    line += ", VIOLATION at (" + format_double(r.violation->first) + ", " + format_double(r.violation->second) +
            ") value " + format_double(r.violation_value);
  } else {
    line += ", ok";
  }
  return line;
}

}  // namespace doleans
