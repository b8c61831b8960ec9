#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "fracdyn/types.hpp"

namespace fracdyn {

/// Ecological parameters of the predator-prey system with habitat complexity.
///
///   D^m x = r x (1 - x/K) - alpha (1-c) x y / (1 + alpha (1-c) h x)
///   D^m y = theta alpha (1-c) x y / (1 + alpha (1-c) h x) - d y
///
/// Existence and uniqueness of solutions rely on the right-hand side being locally
/// Lipschitz on bounded subsets of the quadrant, which it is for every valid parameter set.
struct ModelParams {
  double r = 0.0;      ///< intrinsic prey growth rate
  double K = 0.0;      ///< carrying capacity
  double alpha = 0.0;  ///< maximum attack rate
  double h = 0.0;      ///< handling time
  double theta = 0.0;  ///< conversion efficiency
  double c = 0.0;      ///< degree of habitat complexity
  double d = 0.0;      ///< predator death rate

  /// Throws DomainError naming the first violated constraint.
  void validate() const;

  /// Attack rate reduced by habitat complexity, alpha (1 - c).
  [[nodiscard]] double effective_attack() const noexcept { return alpha * (1.0 - c); }

  /// Reference parameter set r=2.65, K=898, alpha=0.045, h=0.0437, d=1.06 with the given c and theta.
  [[nodiscard]] static ModelParams reference(double c = 0.86, double theta = 0.215);

  [[nodiscard]] ModelParams with_c(double new_c) const {
    ModelParams p = *this;
    p.c = new_c;
    return p;
  }
};

struct Rates {
  double dx = 0.0;
  double dy = 0.0;
};

using EigenPair = std::array<std::complex<double>, 2>;

struct Jacobian2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;

  [[nodiscard]] double trace() const noexcept { return a11 + a22; }
  [[nodiscard]] double det() const noexcept { return a11 * a22 - a12 * a21; }
  /// trace^2 - 4 det; negative means a complex-conjugate pair.
  [[nodiscard]] double discriminant() const noexcept { return trace() * trace() - 4.0 * det(); }
  /// Roots of xi^2 - trace xi + det = 0; the first has the larger real part
  /// (or positive imaginary part for a conjugate pair).
  [[nodiscard]] EigenPair eigenvalues() const;
};

/// Eigenvalues of a real 2x2 matrix from its trace and determinant.
[[nodiscard]] EigenPair eigenvalues_from(double trace, double det);

enum class EquilibriumKind { trivial, predator_free, interior };

[[nodiscard]] std::string to_string(EquilibriumKind kind);

struct Equilibrium {
  EquilibriumKind kind = EquilibriumKind::trivial;
  State point;
  /// For the interior point: x* in (0, K) with theta > h d. The point holds the formula
  /// values whenever theta > h d (even if they leave the quadrant), NaN otherwise.
  bool exists = true;
};

struct Thresholds {
  std::optional<double> c1;      ///< defined when theta > h d
  std::optional<double> c2;      ///< defined when theta > h d and alpha K h > 1
  std::optional<double> theta1;  ///< always defined
  std::optional<double> theta2;  ///< defined when alpha K h > 1
};

[[nodiscard]] Rates rhs(const ModelParams& p, State s) noexcept;

/// Analytic Jacobian of rhs.
[[nodiscard]] Jacobian2 jacobian(const ModelParams& p, State s) noexcept;

/// x* = d / (alpha (1-c) (theta - h d)) and y* from the prey nullcline; no existence check.
[[nodiscard]] State interior_point(const ModelParams& p) noexcept;

/// Trivial, predator-free and interior equilibria (always three entries, in that order).
[[nodiscard]] std::vector<Equilibrium> equilibria(const ModelParams& p);

[[nodiscard]] Equilibrium interior_equilibrium(const ModelParams& p);

/// Jacobian at an equilibrium. At the interior point the predator-nullcline identity
/// makes a22 vanish identically, so it is set to exactly 0.
[[nodiscard]] Jacobian2 equilibrium_jacobian(const ModelParams& p, const Equilibrium& e) noexcept;

[[nodiscard]] Thresholds thresholds(const ModelParams& p);

}  // namespace fracdyn
