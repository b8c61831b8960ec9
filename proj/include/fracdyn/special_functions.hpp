#pragma once

#include <cstddef>

#include "fracdyn/types.hpp"

namespace fracdyn {

/// Gamma function for x > 0 (Lanczos, g = 7). Relative error below 1e-13 on (0, 10].
/// Throws DomainError for x <= 0 or non-finite x.
[[nodiscard]] double gamma_fn(double x);

/// log Gamma(x) for x > 0; stays finite where gamma_fn overflows.
[[nodiscard]] double log_gamma(double x);

struct MittagLefflerOptions {
  /// Absolute tolerance on the series tail. The quadrature path targets
  /// max(tolerance, 1e-11) and throws NonConvergenceError if its error estimate exceeds it.
  double tolerance = 1e-13;
  /// Maximum number of series terms before NonConvergenceError.
  std::size_t max_terms = 20000;
};

/// One-parameter Mittag-Leffler function E_m(z) = sum_k z^k / Gamma(m k + 1) for real z.
///
/// Evaluation paths:
///  - m = 1: exp(z).
///  - z >= 0, or z < 0 with |z|^(1/m) small enough that the alternating series loses
///    fewer than ~5 digits to cancellation: the power series, stopped on the term ratio.
///  - otherwise (z < 0, m < 1): the Laplace-type integral
///      E_m(-x) = sin(m pi)/(m pi) * Int_0^inf exp(-(x v)^(1/m)) / (v^2 + 2 v cos(m pi) + 1) dv
///    by tanh-sinh quadrature with breakpoints at the kernel peak.
///
/// Absolute error is below 1e-10 for |z| <= 50. Beyond that the integral path is still
/// used but has not been validated at that tolerance.
[[nodiscard]] double mittag_leffler(FractionalOrder m, double z, const MittagLefflerOptions& options = {});

namespace detail {

/// Raw power series; reports the largest term magnitude through `max_term`.
[[nodiscard]] double mittag_leffler_series(double m, double z, const MittagLefflerOptions& options,
                                           double* max_term = nullptr);

/// Integral representation of E_m(-x) for 0 < m < 1 and x > 0.
[[nodiscard]] double mittag_leffler_negative_integral(double m, double x, const MittagLefflerOptions& options);

}  // namespace detail

}  // namespace fracdyn
