#pragma once

#include <vector>

#include "doleans/paths.hpp"

namespace doleans {

/// Pathwise factorization E_T(M) = E_T(int a dM) * E_T(N~), where
///   N~ = int (1-a) dM - int a(1-a) / (1 + a dM) d[M]
/// is the corrected process after changing measure with density E_T(int a dM).
struct MeasureChangeDecomposition {
  double log_density_factor = 0.0;
  double log_transformed_exponential = 0.0;
  double log_product = 0.0;
  double density_factor = 1.0;
  /// (time, jump of N~) with jump = (1-a) dM / (1 + a dM) > -1.
  std::vector<Jump> transformed_jumps;
  /// N~_T evaluated pathwise, correction included.
  double transformed_terminal_value = 0.0;
  double transformed_exponential = 1.0;
  double product = 1.0;
};

/// Throws std::invalid_argument when the path has a jump <= -1.
MeasureChangeDecomposition decompose(const JumpPath& path, const PredictableControl& a);

/// density_factor * transformed_exponential - E_T(M), evaluated as
/// E_T(M) * expm1(log product - log E_T(M)) so that it stays accurate
/// relative to E_T(M) even when the exponentials are tiny.
double product_identity_residual(const JumpPath& path, const PredictableControl& a);

/// Log of the P^a-Jacod functional of N~ written in terms of M:
///   1/2 int (1-a)^2 d<M^c> + sum [ln(1+dM) - ln(1+a dM) - (1-a) dM / (1+dM)].
double transformed_jacod_integrand(const JumpPath& path, const PredictableControl& a, double t);

/// (1 - eps^2) x^2 - 2x + 1 + 2 eps 1{1-x<eps}; nonnegative on the domain.
/// Throws std::domain_error unless x in [0, 1] and eps in (0, 1).
double lemma2_lhs(double x, double eps);

/// ln(1 + a dm) + (1-a) dm / (1+dm) - dm / (1+dm); nonnegative on the domain.
/// Throws std::domain_error unless a in [0, 1] and dm > -1.
double lemma3_gap(double a, double dm);

/// jacod_jump_term(dm) - jacod_jump_term(a dm): nonnegative for a in [0, 1].
double jump_reduction_gap(double a, double dm);

}  // namespace doleans
