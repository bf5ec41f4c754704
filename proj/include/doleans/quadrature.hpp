#pragma once

#include <functional>

namespace doleans {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  ///< estimated absolute error
  int evaluations = 0;
  int subdivisions = 0;
  bool converged = false;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature (QUADPACK QAG
/// style). Infinite endpoints are mapped onto a finite interval with
/// x = a + t / (1 - t). Never throws on non-convergence: the result carries
/// `converged == false` and the achieved error bound.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

}  // namespace doleans
