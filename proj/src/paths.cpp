#include "doleans/paths.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <gsl/gsl_sf_dilog.h>

#include "doleans/rng.hpp"
#include "doleans/text.hpp"

namespace doleans {

// ---------------------------------------------------------------------------
// Drift / ContinuousQv

Drift Drift::compensated_exp(double start) {
  if (!(start >= 0.0) || !std::isfinite(start))
    throw std::invalid_argument("compensated drift start must be finite and >= 0");
  Drift d;
  d.kind_ = Kind::kCompensatedExp;
  d.start_ = start;
  return d;
}

double Drift::value(double t, double horizon) const {
  if (kind_ == Kind::kNone) return 0.0;
  const double s = std::min(t, horizon);
  if (s <= start_) return 0.0;
  return -std::expm1(s - start_);
}

double Drift::rate(double t, double horizon) const {
  if (kind_ == Kind::kNone) return 0.0;
  if (t < start_ || t > horizon) return 0.0;
  return -std::exp(t - start_);
}

std::string Drift::tag() const {
  if (kind_ == Kind::kNone) return "none";
  return "compensated_exp:" + format_double(start_);
}

Drift Drift::parse(std::string_view tag) {
  if (tag == "none") return none();
  constexpr std::string_view prefix = "compensated_exp:";
  if (tag.substr(0, prefix.size()) == prefix) return compensated_exp(parse_double(tag.substr(prefix.size())));
  throw std::invalid_argument("unknown drift kind '" + std::string(tag) + "'");
}

ContinuousQv ContinuousQv::linear(double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("continuous quadratic variation rate must be finite and >= 0");
  ContinuousQv q;
  q.kind_ = Kind::kLinear;
  q.rate_ = rate;
  return q;
}

double ContinuousQv::value(double t, double horizon) const {
  if (kind_ == Kind::kZero) return 0.0;
  return rate_ * std::clamp(t, 0.0, horizon);
}

std::string ContinuousQv::tag() const {
  if (kind_ == Kind::kZero) return "zero";
  return "linear:" + format_double(rate_);
}

ContinuousQv ContinuousQv::parse(std::string_view tag) {
  if (tag == "zero") return zero();
  constexpr std::string_view prefix = "linear:";
  if (tag.substr(0, prefix.size()) == prefix) return linear(parse_double(tag.substr(prefix.size())));
  throw std::invalid_argument("unknown continuous quadratic variation kind '" + std::string(tag) + "'");
}

// ---------------------------------------------------------------------------
// JumpPath

double JumpPath::jump_sum(double t) const {
  double sum = 0.0;
  for (const auto& j : jumps) {
    if (j.time > t) break;
    sum += j.size;
  }
  return sum;
}

std::size_t JumpPath::jumps_until(double t) const {
  std::size_t n = 0;
  for (const auto& j : jumps) {
    if (j.time > t) break;
    ++n;
  }
  return n;
}

double JumpPath::value_at(double t) const { return drift_at(t) + jump_sum(t); }

void validate(const JumpPath& path) {
  if (!(path.horizon >= 0.0) || !std::isfinite(path.horizon))
    throw std::invalid_argument("path horizon must be finite and >= 0");
  double prev = 0.0;
  for (const auto& j : path.jumps) {
    if (!std::isfinite(j.time) || !std::isfinite(j.size))
      throw std::invalid_argument("path jump must be finite");
    if (!(j.size > -1.0)) throw std::invalid_argument("path jump size must exceed -1");
    if (!(j.time > prev)) throw std::invalid_argument("path jump times must be strictly increasing and > 0");
    if (j.time > path.horizon) throw std::invalid_argument("path jump after the horizon");
    prev = j.time;
  }
}

// ---------------------------------------------------------------------------
// PredictableControl

PredictableControl::PredictableControl(std::vector<double> breaks, std::vector<double> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {}

PredictableControl PredictableControl::constant(double a) {
  return from_segments({}, {a});
}

PredictableControl PredictableControl::from_segments(std::vector<double> breaks,
                                                     std::vector<double> values) {
  if (values.size() != breaks.size() + 1)
    throw std::invalid_argument("control needs exactly one more value than breakpoints");
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (!(breaks[i] >= 0.0) || !std::isfinite(breaks[i]))
      throw std::invalid_argument("control breakpoints must be finite and >= 0");
    if (i > 0 && !(breaks[i] > breaks[i - 1]))
      throw std::invalid_argument("control breakpoints must be strictly increasing");
  }
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("control values must lie in [0, 1]");
  }
  return PredictableControl(std::move(breaks), std::move(values));
}

double PredictableControl::value_at(double t) const {
  const auto it = std::lower_bound(breaks_.begin(), breaks_.end(), t);
  return values_[static_cast<std::size_t>(it - breaks_.begin())];
}

std::vector<PredictableControl::Segment> PredictableControl::segments(double t_end) const {
  std::vector<Segment> out;
  double begin = 0.0;
  for (std::size_t i = 0; i <= breaks_.size(); ++i) {
    if (begin >= t_end) break;
    const double end = i < breaks_.size() ? std::min(breaks_[i], t_end) : t_end;
    if (end > begin) out.push_back({begin, end, values_[i]});
    if (i < breaks_.size()) begin = std::max(begin, breaks_[i]);
  }
  return out;
}

PredictableControl PredictableControl::complement() const {
  std::vector<double> values;
  values.reserve(values_.size());
  for (double v : values_) values.push_back(1.0 - v);
  return PredictableControl(breaks_, std::move(values));
}

std::string PredictableControl::describe() const {
  if (is_constant()) return format_double(values_[0]);
  if (breaks_.size() == 1 && values_[0] == 0.0 && values_[1] == 1.0)
    return "indicator:" + format_double(breaks_[0]);
  std::string out = "piecewise:" + format_double(values_[0]);
  for (std::size_t i = 0; i < breaks_.size(); ++i)
    out += "|" + format_double(breaks_[i]) + "|" + format_double(values_[i + 1]);
  return out;
}

PredictableControl control_indicator_after(double t0) {
  if (!(t0 >= 0.0)) throw std::invalid_argument("indicator switch time must be >= 0");
  return PredictableControl::from_segments({t0}, {0.0, 1.0});
}

PredictableControl mix(const PredictableControl& a, const PredictableControl& b, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("mixing weight must lie in [0, 1]");
  std::vector<double> breaks;
  std::set_union(a.breaks().begin(), a.breaks().end(), b.breaks().begin(), b.breaks().end(),
                 std::back_inserter(breaks));
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<double> values;
  values.reserve(breaks.size() + 1);
  // Each piece (b_{i-1}, b_i] is represented by its right endpoint.
  for (std::size_t i = 0; i <= breaks.size(); ++i) {
    const double probe = i < breaks.size() ? breaks[i] : (breaks.empty() ? 0.0 : breaks.back() + 1.0);
    const double v = alpha * a.value_at(probe) + (1.0 - alpha) * b.value_at(probe);
    values.push_back(std::clamp(v, 0.0, 1.0));
  }
  return PredictableControl::from_segments(std::move(breaks), std::move(values));
}

double integrate_control_drift(const JumpPath& path, const PredictableControl& a, double t) {
  if (path.drift.kind() == Drift::Kind::kNone) return 0.0;
  double sum = 0.0;
  for (const auto& seg : a.segments(t)) {
    if (seg.value == 0.0) continue;
    sum += seg.value * (path.drift_at(seg.end) - path.drift_at(seg.begin));
  }
  return sum;
}

double integrate_control(const JumpPath& path, const PredictableControl& a, double t) {
  double jump_part = 0.0;
  for (const auto& j : path.jumps) {
    if (j.time > t) break;
    jump_part += a.value_at(j.time) * j.size;
  }
  return jump_part + integrate_control_drift(path, a, t);
}

double integrate_against_cont_qv(const JumpPath& path, const PredictableControl& a, double t,
                                 const std::function<double(double)>& weight) {
  if (path.cont_qv.kind() == ContinuousQv::Kind::kZero) return 0.0;
  double sum = 0.0;
  for (const auto& seg : a.segments(t)) {
    const double w = weight(seg.value);
    if (w == 0.0) continue;
    sum += w * (path.cont_qv_at(seg.end) - path.cont_qv_at(seg.begin));
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Example models

namespace {

JumpPath one_jump_at_one(double x) {
  JumpPath p;
  p.horizon = 1.0;
  p.jumps = {{1.0, x}};
  return p;
}

// Poisson integral of e^{s - start} stopped at its first jump start + u.
JumpPath compensated_exponential_jump(double start, double u) {
  JumpPath p;
  double t = start + u;
  if (!(t > start)) t = std::nextafter(start, std::numeric_limits<double>::infinity());
  p.horizon = t;
  p.jumps = {{t, std::exp(u)}};
  p.drift = Drift::compensated_exp(start);
  return p;
}

// B(s) = int_0^s ((1 + e^u) ln(1 + e^u) - e^u) du. With y = e^u the integrand
// splits into ln(1+y)/y + ln(1+y) - 1, whose antiderivatives are -Li2(-y) and
// (1+y) ln(1+y) - y.
double lm_compensator_closed_form(double s) {
  const double y = std::exp(s);
  constexpr double kLi2MinusOne = -std::numbers::pi * std::numbers::pi / 12.0;
  return -gsl_sf_dilog(-y) + kLi2MinusOne + (1.0 + y) * std::log1p(y) - 2.0 * std::numbers::ln2 - 2.0 * std::expm1(s);
}

}  // namespace

ProcessModel example1_model() {
  auto xi = std::make_shared<const InverseCdfDistribution>(make_xi_distribution());
  ProcessModel m;
  m.name = "example1";
  m.description = "M_t = xi 1{t>=1}: one-jump discrete-time martingale";
  m.sampler = [xi](std::uint64_t seed, std::uint64_t stream) {
    StreamRng rng(seed, stream);
    return one_jump_at_one(sample(*xi, rng.next_open_unit()));
  };
  m.factors = {{xi, one_jump_at_one}};
  return m;
}

ProcessModel example2_model(double max_jump_time) {
  if (!(max_jump_time > 0.0)) throw std::invalid_argument("jump-time cap must be positive");
  auto tau = std::make_shared<const InverseCdfDistribution>(make_first_jump_time());
  ProcessModel m;
  m.name = "example2";
  m.description = "M_t = int_0^t e^s dN_{s^tau1}: compensated Poisson integral stopped at its first jump";
  m.sampler = [tau, max_jump_time](std::uint64_t seed, std::uint64_t stream) {
    StreamRng rng(seed, stream);
    double t = sample(*tau, rng.next_open_unit());
    const bool capped = t > max_jump_time;
    if (capped) t = max_jump_time;
    JumpPath p = compensated_exponential_jump(0.0, t);
    p.capped = capped;
    return p;
  };
  m.disc_qv = [](const JumpPath& path, double t) {
    const double s = std::clamp(t, 0.0, path.horizon);
    return 0.5 * std::expm1(2.0 * s);
  };
  m.lm_compensator = [](const JumpPath& path, double t) {
    const double s = std::clamp(t, 0.0, path.horizon);
    return s == 0.0 ? 0.0 : lm_compensator_closed_form(s);
  };
  // Same cap as the sampler, so quadrature and Monte Carlo see one law.
  m.factors = {{tau, [max_jump_time](double u) {
                  JumpPath p = compensated_exponential_jump(0.0, std::min(u, max_jump_time));
                  p.capped = u > max_jump_time;
                  return p;
                }}};
  return m;
}

ProcessModel example3_model(double max_jump_time) {
  if (!(max_jump_time > 0.0)) throw std::invalid_argument("jump-time cap must be positive");
  auto eta = std::make_shared<const InverseCdfDistribution>(make_eta_distribution());
  auto wait = std::make_shared<const InverseCdfDistribution>(make_first_jump_time());
  ProcessModel m;
  m.name = "example3";
  m.description =
      "M_t = eta 1{t>=1} + int_1^t e^{s-1} dN^_{s^tau^1}: jump at 1 plus a Poisson integral restarted at 1";
  m.sampler = [eta, wait, max_jump_time](std::uint64_t seed, std::uint64_t stream) {
    StreamRng rng(seed, stream);
    const double x = sample(*eta, rng.next_open_unit());
    double u = sample(*wait, rng.next_open_unit());
    const bool capped = u > max_jump_time;
    if (capped) u = max_jump_time;
    JumpPath p = compensated_exponential_jump(1.0, u);
    p.jumps.insert(p.jumps.begin(), Jump{1.0, x});
    p.capped = capped;
    return p;
  };
  m.factors = {{eta, one_jump_at_one},
               {wait, [max_jump_time](double u) {
                  JumpPath p = compensated_exponential_jump(1.0, std::min(u, max_jump_time));
                  p.capped = u > max_jump_time;
                  return p;
                }}};
  return m;
}

ProcessModel model_by_name(std::string_view name) {
  if (name == "example1") return example1_model();
  if (name == "example2") return example2_model();
  if (name == "example3") return example3_model();
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

}  // namespace doleans
