#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fracdyn/model.hpp"
#include "fracdyn/types.hpp"

namespace fracdyn {

// Piecewise-constant-argument discretization of the fractional system:
//
//   x_{n+1} = x_n + S * f(x_n, y_n),   y_{n+1} = y_n + S * g(x_n, y_n),
//   S = s^m / (m Gamma(m)) = s^m / Gamma(m + 1),
//
// where (f, g) is the continuous right-hand side. For m = 1 this is forward Euler with step s.

struct DiscreteConfig {
  double s = 0.1;
  FractionalOrder m{1.0};
  std::size_t iterations = 1000;
  std::size_t transient = 0;

  void validate() const;
};

/// Gain S = s^m / (m Gamma(m)).
[[nodiscard]] double map_gain(double s, FractionalOrder m);

/// Inverse of map_gain: the step size s with s^m / (m Gamma(m)) = gain.
[[nodiscard]] double step_from_gain(double gain, FractionalOrder m);

/// One application of the map. Throws DivergenceError if the result is not finite.
[[nodiscard]] State step_map(const ModelParams& p, double s, FractionalOrder m, State st);

struct DiscreteOrbit {
  /// iterations + 1 states (x_0 .. x_N), shorter if the orbit escaped.
  std::vector<State> states;
  DiscreteConfig config;
  bool escaped = false;
};

inline constexpr double orbit_escape_bound = 1e12;

/// Iterates the map from x0. Escape (non-finite or |component| > 1e12) stops the orbit and
/// sets `escaped`; the escaping state is not stored.
[[nodiscard]] DiscreteOrbit iterate_orbit(const ModelParams& p, const DiscreteConfig& cfg, State x0);

/// Jacobian of the map, I + S * J_continuous.
[[nodiscard]] Jacobian2 discrete_jacobian(const ModelParams& p, double s, FractionalOrder m, State st);

/// Discrete Jacobian at an equilibrium (uses the exact a22 = 0 continuous entry at E*).
[[nodiscard]] Jacobian2 discrete_jacobian(const ModelParams& p, double s, FractionalOrder m, const Equilibrium& e);

/// Interior-point constants G and H, defined whenever theta > h d:
///   G = r x* / (K theta) * (theta + h d - alpha h K (1-c)(theta - h d))
///   H = r x* (theta - h d) / (K theta) * (alpha K (1-c)(theta - h d) - d)
/// As functions of S, det(J) = 1 - S G + S^2 H and trace(J) = 2 - S G at E*.
struct InteriorConstants {
  double G = 0.0;
  double H = 0.0;
};

[[nodiscard]] std::optional<InteriorConstants> interior_constants(const ModelParams& p);

struct StepThresholds {
  std::optional<double> s1;
  std::optional<double> s2;
  std::optional<double> s3;
  std::optional<double> s4;
  std::optional<double> s5;
  std::optional<double> G;
  std::optional<double> H;
  /// Why an absent threshold is absent, one entry per absent value ("s3: ...").
  std::vector<std::string> notes;
};

/// s1 = (2 m Gamma(m) / d)^(1/m), s2 = (2 m Gamma(m) / r)^(1/m),
/// s3 = (2 m Gamma(m) (1 + alpha K h (1-c)) / (d - K alpha (1-c)(theta - h d)))^(1/m) when the denominator is > 0,
/// s4 = (m Gamma(m) G / H)^(1/m) when G, H > 0, s5 = (2 m Gamma(m) / G)^(1/m) when G > 0.
[[nodiscard]] StepThresholds step_thresholds(const ModelParams& p, FractionalOrder m);

enum class FixedPointType { stable, saddle, source, nonhyperbolic };

[[nodiscard]] std::string to_string(FixedPointType t);

struct FixedPointReport {
  Equilibrium equilibrium;
  Jacobian2 jacobian;
  EigenPair eigenvalues;
  FixedPointType type = FixedPointType::nonhyperbolic;
  /// Complex pair with modulus > 1.
  bool spiral_source = false;
  /// Jury quantities 1 - det, 1 - trace + det, 1 + trace + det.
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
};

/// Relative tolerance under which s (or c) is treated as equal to a threshold.
inline constexpr double threshold_rel_tol = 1e-12;

/// Classifies each existing fixed point of the map. E0 and E1 are decided by the step-size
/// thresholds (and c against c1 for E1); E* by the three Jury inequalities, which are
/// necessary and sufficient for both eigenvalues inside the unit circle. An eigenvalue on
/// the unit circle (within 1e-12 relative) is nonhyperbolic.
[[nodiscard]] std::vector<FixedPointReport> classify_fixed_points(const ModelParams& p, double s, FractionalOrder m);

enum class BifurcationKind { transcritical, flip, hopf };

[[nodiscard]] std::string to_string(BifurcationKind k);

struct BifurcationEvent {
  BifurcationKind kind = BifurcationKind::hopf;
  EquilibriumKind fixed_point = EquilibriumKind::predator_free;
  double c = 0.0;
  double s = 0.0;
  /// |Jury expression| at the event (1 - trace + det, 1 + trace + det, or 1 - det).
  double residual = 0.0;
};

/// Transcritical of E1 at c = c1; flip of E1 at (c1, s5), where G = r so that s5 = s2;
/// Hopf (Neimark-Sacker) of E* at s = s4 when 0 < G < 2 sqrt(H). Events whose residual
/// exceeds 1e-8 are dropped.
[[nodiscard]] std::vector<BifurcationEvent> detect_structural_bifurcations(const ModelParams& p, FractionalOrder m);

struct NormalFormPartials {
  double p_uu = 0.0;
  double p_uv = 0.0;
  double p_vv = 0.0;
  double q_uu = 0.0;
  double q_uv = 0.0;
  double q_vv = 0.0;
};

struct NormalFormData {
  double s4 = 0.0;
  double S1 = 0.0;
  double c11 = 0.0;
  double c12 = 0.0;
  double c21 = 0.0;
  double c22 = 0.0;
  double c13 = 0.0;
  double c23 = 0.0;
  double delta = 0.0;
  double beta = 0.0;
  EigenPair lambda;
  double transversality = 0.0;
  bool nonresonance_ok = false;
  NormalFormPartials partials;
  std::complex<double> xi11;
  std::complex<double> xi20;
  std::complex<double> xi02;
  std::complex<double> xi21;
  double gamma = 0.0;
};

/// Neimark-Sacker normal form at s = s4 (perturbation S* = 0).
///
///   lambda_{1,2} = (2 - S1 G +- i S1 sqrt(4H - G^2)) / 2, delta = Re, beta = Im(lambda_1)
///   transversality d|lambda|/dS* = G/2;  nonresonance G^2 != 3H, 2H (relative tol 1e-9)
///
/// The quadratic part uses the coefficients c13, c23 and the partials of P and Q exactly as
///   P = c13 ((delta - c11) u^2 - beta u v)
///   Q = ((c11 - delta) c13 + c12 c23) ((c11 - delta)/beta u^2 + u v)
/// with all third partials zero (so xi21 = 0), and
///   gamma = -Re((1 - 2 lambda1) lambda2^2 / (1 - lambda1) xi11 xi20) - |xi11|^2 / 2 - |xi02|^2 + Re(lambda2 xi21).
///
/// Throws PreconditionError naming the failing inequality when the interior fixed point is
/// missing or 0 < G < 2 sqrt(H) does not hold.
[[nodiscard]] NormalFormData hopf_normal_form(const ModelParams& p, FractionalOrder m);

/// Orbit-based check of the Hopf criticality, independent of the xi formulas. Iterates the
/// map at s = s4 + ds from a small perturbation of E*, and measures the mean radius R of the
/// settled invariant circle in the normal-form coordinates (u, v) = T^{-1}(X, Y). The radial
/// map r -> r (1 + mu + l1 r^2) then gives l1 = -mu / R^2 with mu = |lambda(s)| - 1.
struct CriticalityEstimate {
  double s = 0.0;
  double mu = 0.0;
  double radius = 0.0;
  double l1 = 0.0;
  bool escaped = false;
  /// l1 < 0 with a bounded circle: supercritical (attracting invariant circle).
  [[nodiscard]] bool supercritical() const noexcept { return !escaped && l1 < 0.0; }
};

[[nodiscard]] CriticalityEstimate estimate_hopf_criticality(const ModelParams& p, FractionalOrder m, double ds = 1e-3,
                                                           std::size_t iterations = 200000,
                                                           std::size_t averaging_window = 20000);

}  // namespace fracdyn
