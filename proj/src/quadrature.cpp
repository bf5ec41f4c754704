#include "doleans/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace doleans {

namespace {

// 21-point Kronrod abscissae on [-1, 1] (positive half) and weights; the
// odd-indexed abscissae are the 10-point Gauss nodes.
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod21(const F& f, double a, double b, int& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = 0.0;
  double resk = kWgk[10] * fc;
  double resabs = std::fabs(resk);
  double fv1[10];
  double fv2[10];
  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double absc = half * kXgk[jtw];
    const double f1 = f(center - absc);
    const double f2 = f(center + absc);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::fabs(f1) + std::fabs(f2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double absc = half * kXgk[jtwm1];
    const double f1 = f(center - absc);
    const double f2 = f(center + absc);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::fabs(f1) + std::fabs(f2));
  }
  evals += 21;
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::fabs(fc - reskh);
  for (int j = 0; j < 10; ++j)
    resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));

  const double value = resk * half;
  resabs *= std::fabs(half);
  resasc *= std::fabs(half);
  double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
    err = std::max(50.0 * kEps * resabs, err);
  if (!std::isfinite(value)) err = std::numeric_limits<double>::infinity();
  return {a, b, value, err};
}

template <class F>
QuadratureResult adapt(const F& f, double a, double b, const QuadratureOptions& opts) {
  QuadratureResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  std::priority_queue<Panel> heap;
  Panel first = gauss_kronrod21(f, a, b, res.evaluations);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  // Panels too narrow to split further; their error cannot be reduced.
  std::vector<Panel> frozen;
  auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::fabs(total)); };

  while (!(error <= tolerance()) && res.subdivisions < opts.max_subdivisions && !heap.empty()) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        std::fabs(worst.b - worst.a) <= 1e3 * std::numeric_limits<double>::epsilon() *
                                             std::max(std::fabs(worst.a), std::fabs(worst.b))) {
      frozen.push_back(worst);
      continue;
    }
    Panel left = gauss_kronrod21(f, worst.a, mid, res.evaluations);
    Panel right = gauss_kronrod21(f, mid, worst.b, res.evaluations);
    ++res.subdivisions;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from the panels to shed accumulated update round-off.
  double sum = 0.0;
  double err = 0.0;
  for (const auto& p : frozen) {
    sum += p.value;
    err += p.error;
  }
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  res.value = sum;
  res.error = err;
  res.converged = std::isfinite(sum) && err <= std::max(opts.abs_tol, opts.rel_tol * std::fabs(sum));
  return res;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
  if (std::isnan(a) || std::isnan(b)) throw std::invalid_argument("integrate: NaN bound");
  if (a > b) {
    QuadratureResult r = integrate(f, b, a, opts);
    r.value = -r.value;
    return r;
  }
  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  if (!lo_inf && !hi_inf) return adapt(f, a, b, opts);
  if (lo_inf && hi_inf) {
    QuadratureOptions half = opts;
    half.abs_tol = 0.5 * opts.abs_tol;
    QuadratureResult l = integrate(f, a, 0.0, half);
    QuadratureResult r = integrate(f, 0.0, b, half);
    return {l.value + r.value, l.error + r.error, l.evaluations + r.evaluations,
            l.subdivisions + r.subdivisions, l.converged && r.converged};
  }
  if (hi_inf) {
    auto g = [&](double t) {
      const double s = 1.0 - t;
      const double x = a + t / s;
      const double y = f(x);
      return y == 0.0 ? 0.0 : y / (s * s);
    };
    return adapt(g, 0.0, 1.0, opts);
  }
  auto g = [&](double t) {
    const double s = 1.0 - t;
    const double x = b - t / s;
    const double y = f(x);
    return y == 0.0 ? 0.0 : y / (s * s);
  };
  return adapt(g, 0.0, 1.0, opts);
}

}  // namespace doleans
