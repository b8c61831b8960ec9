#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracdyn/model.hpp"
#include "fracdyn/types.hpp"

namespace fracdyn {

enum class Verdict { stable, unstable, nonhyperbolic };

/// Matignon's test: stable iff min |arg(xi_i)| > m pi/2. A zero eigenvalue or
/// |arg| = m pi/2 (to 1e-12 rad) is nonhyperbolic.
[[nodiscard]] Verdict matignon_verdict(const EigenPair& eigs, FractionalOrder m);

/// Boolean form of matignon_verdict; throws NonhyperbolicError on the boundary.
[[nodiscard]] bool matignon_stable(const EigenPair& eigs, FractionalOrder m);

/// Fractional Routh-Hurwitz conditions for xi^2 + a1 xi + a2:
///  - D = a1^2 - 4 a2 >= 0: stable iff a1 > 0 and a2 > 0;
///  - D < 0: stable iff the principal argument of the complex root (-a1 + i sqrt(-D))/2
///    exceeds m pi/2 (for a1 >= 0 this always holds when m < 1).
[[nodiscard]] Verdict routh_hurwitz_verdict(double a1, double a2, FractionalOrder m);

/// Boolean form; throws NonhyperbolicError when a2 = 0 or the root sits on the boundary.
[[nodiscard]] bool routh_hurwitz_fractional(double a1, double a2, FractionalOrder m);

enum class CriticalOrderReason { hopf, stable_for_all_orders, unstable_for_all_orders };

struct CriticalOrder {
  std::optional<double> m_star;
  CriticalOrderReason reason = CriticalOrderReason::hopf;
  double trace = 0.0;
  double det = 0.0;
};

/// m* = (2/pi) |acos(trace / (2 sqrt(det)))| at the interior equilibrium, present only when
/// 0 < trace < 2 sqrt(det). Throws DomainError if the interior equilibrium does not exist.
[[nodiscard]] CriticalOrder critical_order(const ModelParams& p);

enum class Classification { stable, unstable, saddle, nonhyperbolic };

[[nodiscard]] std::string to_string(Classification c);

/// Sub-interval of (0, 1] of fractional orders.
struct OrderInterval {
  double lo = 0.0;
  double hi = 1.0;
  bool lo_closed = false;
  bool hi_closed = true;

  [[nodiscard]] bool contains(double m) const noexcept {
    return (lo_closed ? m >= lo : m > lo) && (hi_closed ? m <= hi : m < hi);
  }
};

struct StabilityReport {
  Equilibrium equilibrium;
  EigenPair eigenvalues;
  Classification classification = Classification::nonhyperbolic;
  /// Orders on which the same classification holds (contains the queried m).
  OrderInterval valid_orders;
  std::optional<double> m_star;
};

/// Classifies every existing equilibrium at order m (E0, E1, and E* when it exists).
[[nodiscard]] std::vector<StabilityReport> classify_equilibria(const ModelParams& p, FractionalOrder m);

/// Sufficient-condition checks only: `false` means "not guaranteed by these hypotheses".
struct GlobalStabilityFlags {
  /// c > c1 and theta > theta1.
  bool predator_free_global = false;
  /// c2 < c < c1, theta > theta2, alpha > 1/(K h).
  bool interior_global = false;
};

[[nodiscard]] GlobalStabilityFlags global_stability_check(const ModelParams& p);

/// Upper envelope for V(t) = x(t) + y(t)/theta:
///   (V0 - l/eta) E_m(-eta t^m) + l/eta,  l = K (r + eta)^2 / (4 r),  0 < eta < d.
[[nodiscard]] double boundedness_envelope(const ModelParams& p, FractionalOrder m, double eta, double v0, double t);

/// V = x + y/theta.
[[nodiscard]] inline double envelope_functional(const ModelParams& p, State s) noexcept {
  return s.x + s.y / p.theta;
}

}  // namespace fracdyn
