#include "fracdyn/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracdyn/errors.hpp"
#include "fracdyn/special_functions.hpp"

namespace fracdyn {

namespace {

constexpr double boundary_tol = 1e-12;

double min_abs_arg(const EigenPair& eigs) {
  return std::min(std::fabs(std::arg(eigs[0])), std::fabs(std::arg(eigs[1])));
}

Verdict verdict_from_angle(double phi, double m) {
  const double edge = m * std::numbers::pi / 2.0;
  if (std::fabs(phi - edge) <= boundary_tol) return Verdict::nonhyperbolic;
  return phi > edge ? Verdict::stable : Verdict::unstable;
}

bool has_zero(const EigenPair& eigs) { return eigs[0] == 0.0 || eigs[1] == 0.0; }

bool unwrap(Verdict v, const char* what) {
  if (v == Verdict::nonhyperbolic) throw NonhyperbolicError(what);
  return v == Verdict::stable;
}

// Classification that holds on the order interval containing m, given the
// smallest eigenvalue argument phi (stable exactly for m < 2 phi / pi).
void classify_by_angle(double phi, double m, StabilityReport& rep) {
  const double m_edge = 2.0 * phi / std::numbers::pi;
  switch (verdict_from_angle(phi, m)) {
    case Verdict::stable:
      rep.classification = Classification::stable;
      rep.valid_orders = m_edge > 1.0 ? OrderInterval{0.0, 1.0, false, true} : OrderInterval{0.0, m_edge, false, false};
      break;
    case Verdict::unstable:
      rep.classification = Classification::unstable;
      rep.valid_orders = OrderInterval{m_edge, 1.0, false, true};
      break;
    case Verdict::nonhyperbolic:
      rep.classification = Classification::nonhyperbolic;
      rep.valid_orders = OrderInterval{m, m, true, true};
      break;
  }
}

void classify_eigs(const EigenPair& eigs, double m, StabilityReport& rep) {
  rep.eigenvalues = eigs;
  if (has_zero(eigs)) {
    rep.classification = Classification::nonhyperbolic;
    rep.valid_orders = OrderInterval{0.0, 1.0, false, true};
    return;
  }
  const bool real_pair = eigs[0].imag() == 0.0 && eigs[1].imag() == 0.0;
  if (real_pair && (eigs[0].real() > 0.0) != (eigs[1].real() > 0.0)) {
    rep.classification = Classification::saddle;
    rep.valid_orders = OrderInterval{0.0, 1.0, false, true};
    return;
  }
  classify_by_angle(min_abs_arg(eigs), m, rep);
}

}  // namespace

Verdict matignon_verdict(const EigenPair& eigs, FractionalOrder m) {
  if (has_zero(eigs)) return Verdict::nonhyperbolic;
  return verdict_from_angle(min_abs_arg(eigs), m.value());
}

bool matignon_stable(const EigenPair& eigs, FractionalOrder m) {
  return unwrap(matignon_verdict(eigs, m), "eigenvalue on the Matignon boundary: neither stable nor unstable");
}

Verdict routh_hurwitz_verdict(double a1, double a2, FractionalOrder m) {
  if (a2 == 0.0) return Verdict::nonhyperbolic;
  const double disc = a1 * a1 - 4.0 * a2;
  if (disc >= 0.0) {
    if (a1 > 0.0 && a2 > 0.0) return Verdict::stable;
    // A real root at zero is excluded by a2 != 0; with a1 = 0 and a2 < 0
    // the roots are +-sqrt(-a2), one of them positive.
    return Verdict::unstable;
  }
  // Complex pair (-a1 +- i sqrt(-disc)) / 2: the argument of the upper root.
  const double phi = std::atan2(std::sqrt(-disc), -a1);
  return verdict_from_angle(phi, m.value());
}

bool routh_hurwitz_fractional(double a1, double a2, FractionalOrder m) {
  return unwrap(routh_hurwitz_verdict(a1, a2, m), "characteristic root on the stability boundary");
}

CriticalOrder critical_order(const ModelParams& p) {
  const Equilibrium e = interior_equilibrium(p);
  if (!e.exists) throw DomainError("critical order requires an interior equilibrium");
  const Jacobian2 j = equilibrium_jacobian(p, e);
  CriticalOrder out;
  out.trace = j.trace();
  out.det = j.det();
  if (out.trace < 0.0) {
    out.reason = CriticalOrderReason::stable_for_all_orders;
    return out;
  }
  const double bound = 2.0 * std::sqrt(out.det);
  if (!(out.trace > 0.0) || !(out.trace < bound)) {
    // trace = 0 puts the pair on the imaginary axis; this only matters at m = 1,
    // which the caller sees through the classification.
    out.reason = out.trace == 0.0 ? CriticalOrderReason::stable_for_all_orders
                                  : CriticalOrderReason::unstable_for_all_orders;
    if (out.trace == 0.0) out.m_star = 1.0;
    return out;
  }
  out.reason = CriticalOrderReason::hopf;
  out.m_star = 2.0 / std::numbers::pi * std::fabs(std::acos(out.trace / bound));
  return out;
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::stable:
      return "stable";
    case Classification::unstable:
      return "unstable";
    case Classification::saddle:
      return "saddle";
    case Classification::nonhyperbolic:
      return "nonhyperbolic";
  }
  return "unknown";
}

std::vector<StabilityReport> classify_equilibria(const ModelParams& p, FractionalOrder m) {
  std::vector<StabilityReport> out;
  for (const Equilibrium& e : equilibria(p)) {
    if (!e.exists) continue;
    StabilityReport rep;
    rep.equilibrium = e;
    const Jacobian2 j = equilibrium_jacobian(p, e);
    if (e.kind == EquilibriumKind::interior) {
      classify_eigs(j.eigenvalues(), m.value(), rep);
      rep.m_star = critical_order(p).m_star;
    } else {
      // Both boundary Jacobians are triangular; read the eigenvalues off the diagonal.
      const double hi = std::fmax(j.a11, j.a22);
      const double lo = std::fmin(j.a11, j.a22);
      classify_eigs(EigenPair{std::complex<double>(hi, 0.0), std::complex<double>(lo, 0.0)}, m.value(), rep);
    }
    out.push_back(rep);
  }
  return out;
}

GlobalStabilityFlags global_stability_check(const ModelParams& p) {
  const Thresholds t = thresholds(p);
  GlobalStabilityFlags f;
  f.predator_free_global = t.c1 && t.theta1 && p.c > *t.c1 && p.theta > *t.theta1;
  f.interior_global = t.c1 && t.c2 && t.theta2 && p.c > *t.c2 && p.c < *t.c1 && p.theta > *t.theta2 &&
                      p.alpha > 1.0 / (p.K * p.h);
  return f;
}

double boundedness_envelope(const ModelParams& p, FractionalOrder m, double eta, double v0, double t) {
  p.validate();
  if (!(eta > 0.0 && eta < p.d)) throw DomainError("envelope rate eta must satisfy 0 < eta < d");
  if (!(v0 >= 0.0)) throw DomainError("envelope initial value V0 must be >= 0");
  if (!(t >= 0.0)) throw DomainError("envelope time must be >= 0");
  const double l = p.K * (p.r + eta) * (p.r + eta) / (4.0 * p.r);
  const double rest = l / eta;
  if (t == 0.0) return v0;
  return (v0 - rest) * mittag_leffler(m, -eta * std::pow(t, m.value())) + rest;
}

}  // namespace fracdyn
