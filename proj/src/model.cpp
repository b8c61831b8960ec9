#include "fracdyn/model.hpp"

#include <cmath>
#include <limits>

namespace fracdyn {

namespace {

void require(bool ok, const char* what, double value) {
  if (!ok) {
    throw DomainError(std::string("invalid model parameter: ") + what + " (got " + std::to_string(value) + ")");
  }
}

}  // namespace

void ModelParams::validate() const {
  require(std::isfinite(r) && r > 0.0, "r must be > 0", r);
  require(std::isfinite(K) && K > 0.0, "K must be > 0", K);
  require(std::isfinite(alpha) && alpha > 0.0, "alpha must be > 0", alpha);
  require(std::isfinite(h) && h > 0.0, "h must be > 0", h);
  require(std::isfinite(d) && d > 0.0, "d must be > 0", d);
  require(std::isfinite(theta) && theta > 0.0 && theta < 1.0, "theta must satisfy 0 < theta < 1", theta);
  require(std::isfinite(c) && c >= 0.0 && c < 1.0, "c must satisfy 0 <= c < 1", c);
}

ModelParams ModelParams::reference(double c, double theta) {
  return ModelParams{.r = 2.65, .K = 898.0, .alpha = 0.045, .h = 0.0437, .theta = theta, .c = c, .d = 1.06};
}

EigenPair eigenvalues_from(double trace, double det) {
  const double disc = trace * trace - 4.0 * det;
  if (disc < 0.0) {
    const double re = 0.5 * trace;
    const double im = 0.5 * std::sqrt(-disc);
    return {std::complex<double>(re, im), std::complex<double>(re, -im)};
  }
  const double root = std::sqrt(disc);
  // Avoid cancellation in the smaller root.
  const double big = trace >= 0.0 ? 0.5 * (trace + root) : 0.5 * (trace - root);
  const double small = big != 0.0 ? det / big : 0.0;
  const double hi = std::fmax(big, small);
  const double lo = std::fmin(big, small);
  return {std::complex<double>(hi, 0.0), std::complex<double>(lo, 0.0)};
}

EigenPair Jacobian2::eigenvalues() const { return eigenvalues_from(trace(), det()); }

std::string to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::trivial:
      return "E0";
    case EquilibriumKind::predator_free:
      return "E1";
    case EquilibriumKind::interior:
      return "Estar";
  }
  return "unknown";
}

Rates rhs(const ModelParams& p, State s) noexcept {
  const double a = p.effective_attack();
  const double predation = a * s.x * s.y / (1.0 + a * p.h * s.x);
  return Rates{p.r * s.x * (1.0 - s.x / p.K) - predation, p.theta * predation - p.d * s.y};
}

Jacobian2 jacobian(const ModelParams& p, State s) noexcept {
  const double a = p.effective_attack();
  const double denom = 1.0 + a * p.h * s.x;
  const double denom2 = denom * denom;
  return Jacobian2{
      .a11 = p.r * (1.0 - 2.0 * s.x / p.K) - a * s.y / denom2,
      .a12 = -a * s.x / denom,
      .a21 = p.theta * a * s.y / denom2,
      .a22 = p.theta * a * s.x / denom - p.d,
  };
}

State interior_point(const ModelParams& p) noexcept {
  const double a = p.effective_attack();
  const double x = p.d / (a * (p.theta - p.h * p.d));
  const double y = p.r * (p.K - x) * (1.0 + a * p.h * x) / (p.alpha * p.K * (1.0 - p.c));
  return State{x, y};
}

Equilibrium interior_equilibrium(const ModelParams& p) {
  p.validate();
  Equilibrium e;
  e.kind = EquilibriumKind::interior;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (!(p.theta > p.h * p.d)) {
    e.point = State{nan, nan};
    e.exists = false;
    return e;
  }
  e.point = interior_point(p);
  e.exists = e.point.x > 0.0 && e.point.x < p.K;
  return e;
}

Jacobian2 equilibrium_jacobian(const ModelParams& p, const Equilibrium& e) noexcept {
  Jacobian2 j = jacobian(p, e.point);
  if (e.kind == EquilibriumKind::interior) j.a22 = 0.0;
  return j;
}

std::vector<Equilibrium> equilibria(const ModelParams& p) {
  p.validate();
  return {
      Equilibrium{.kind = EquilibriumKind::trivial, .point = State{0.0, 0.0}, .exists = true},
      Equilibrium{.kind = EquilibriumKind::predator_free, .point = State{p.K, 0.0}, .exists = true},
      interior_equilibrium(p),
  };
}

Thresholds thresholds(const ModelParams& p) {
  p.validate();
  Thresholds t;
  const double hd = p.h * p.d;
  const double akh = p.alpha * p.K * p.h;
  t.theta1 = hd + p.d / (p.alpha * p.K);
  if (p.theta > hd) {
    t.c1 = 1.0 - p.d / (p.alpha * p.K * (p.theta - hd));
  }
  if (akh > 1.0) {
    t.theta2 = hd * (akh + 1.0) / (akh - 1.0);
    if (p.theta > hd) {
      t.c2 = 1.0 - (p.theta + hd) / (akh * (p.theta - hd));
    }
  }
  return t;
}

}  // namespace fracdyn
