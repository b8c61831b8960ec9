#include "fracdyn/discrete_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracdyn/errors.hpp"
#include "fracdyn/special_functions.hpp"

namespace fracdyn {

namespace {

bool near(double a, double b) { return std::fabs(a - b) <= threshold_rel_tol * std::fmax(std::fabs(a), std::fabs(b)); }

double mGamma(FractionalOrder m) { return m.value() * gamma_fn(m.value()); }

double root_m(double v, FractionalOrder m) { return std::pow(v, 1.0 / m.value()); }

FixedPointReport base_report(const ModelParams& p, double s, FractionalOrder m, const Equilibrium& e) {
  FixedPointReport rep;
  rep.equilibrium = e;
  rep.jacobian = discrete_jacobian(p, s, m, e);
  rep.eigenvalues = rep.jacobian.eigenvalues();
  const double tr = rep.jacobian.trace();
  const double det = rep.jacobian.det();
  rep.q1 = 1.0 - det;
  rep.q2 = 1.0 - tr + det;
  rep.q3 = 1.0 + tr + det;
  const bool complex_pair = rep.eigenvalues[0].imag() != 0.0;
  rep.spiral_source = complex_pair && std::abs(rep.eigenvalues[0]) > 1.0;
  return rep;
}

// Position of s relative to a threshold: -1 below, 0 equal, +1 above.
int side(double s, const std::optional<double>& threshold) {
  if (!threshold) return -1;  // an undefined threshold never binds
  if (near(s, *threshold)) return 0;
  return s < *threshold ? -1 : 1;
}

FixedPointType from_moduli(const EigenPair& eigs) {
  int outside = 0;
  for (const auto& z : eigs) {
    const double r = std::abs(z);
    if (std::fabs(r - 1.0) <= threshold_rel_tol) return FixedPointType::nonhyperbolic;
    if (r > 1.0) ++outside;
  }
  if (outside == 2) return FixedPointType::source;
  return outside == 1 ? FixedPointType::saddle : FixedPointType::stable;
}

}  // namespace

void DiscreteConfig::validate() const {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("step size s must be > 0");
  if (iterations < 1) throw DomainError("iterations must be >= 1");
  if (transient >= iterations) throw DomainError("transient must be smaller than iterations");
}

double map_gain(double s, FractionalOrder m) {
  if (!(s > 0.0)) throw DomainError("step size s must be > 0");
  return std::pow(s, m.value()) / mGamma(m);
}

double step_from_gain(double gain, FractionalOrder m) {
  if (!(gain > 0.0)) throw DomainError("map gain must be > 0");
  return root_m(gain * mGamma(m), m);
}

State step_map(const ModelParams& p, double s, FractionalOrder m, State st) {
  const double S = map_gain(s, m);
  const Rates f = rhs(p, st);
  const State next{st.x + S * f.dx, st.y + S * f.dy};
  if (!is_finite(next)) throw DivergenceError("discrete map produced a non-finite state", 1, s);
  return next;
}

DiscreteOrbit iterate_orbit(const ModelParams& p, const DiscreteConfig& cfg, State x0) {
  p.validate();
  cfg.validate();
  if (!is_finite(x0)) throw DomainError("initial state must be finite");
  const double S = map_gain(cfg.s, cfg.m);

  DiscreteOrbit orbit;
  orbit.config = cfg;
  orbit.states.reserve(cfg.iterations + 1);
  orbit.states.push_back(x0);
  State st = x0;
  for (std::size_t n = 0; n < cfg.iterations; ++n) {
    const Rates f = rhs(p, st);
    st = State{st.x + S * f.dx, st.y + S * f.dy};
    if (!is_finite(st) || std::fabs(st.x) > orbit_escape_bound || std::fabs(st.y) > orbit_escape_bound) {
      orbit.escaped = true;
      break;
    }
    orbit.states.push_back(st);
  }
  return orbit;
}

namespace {

Jacobian2 shift(const Jacobian2& j, double S) {
  return Jacobian2{.a11 = 1.0 + S * j.a11, .a12 = S * j.a12, .a21 = S * j.a21, .a22 = 1.0 + S * j.a22};
}

}  // namespace

Jacobian2 discrete_jacobian(const ModelParams& p, double s, FractionalOrder m, State st) {
  return shift(jacobian(p, st), map_gain(s, m));
}

Jacobian2 discrete_jacobian(const ModelParams& p, double s, FractionalOrder m, const Equilibrium& e) {
  return shift(equilibrium_jacobian(p, e), map_gain(s, m));
}

std::optional<InteriorConstants> interior_constants(const ModelParams& p) {
  p.validate();
  const double hd = p.h * p.d;
  if (!(p.theta > hd)) return std::nullopt;
  const double a = p.effective_attack();
  const double x = interior_point(p).x;
  const double scale = p.r * x / (p.K * p.theta);
  return InteriorConstants{
      .G = scale * (p.theta + hd - p.alpha * p.h * p.K * (1.0 - p.c) * (p.theta - hd)),
      .H = scale * (p.theta - hd) * (a * p.K * (p.theta - hd) - p.d),
  };
}

StepThresholds step_thresholds(const ModelParams& p, FractionalOrder m) {
  p.validate();
  StepThresholds t;
  const double mg = mGamma(m);
  const double a = p.effective_attack();
  t.s1 = root_m(2.0 * mg / p.d, m);
  t.s2 = root_m(2.0 * mg / p.r, m);
  const double s3_den = p.d - p.K * a * (p.theta - p.h * p.d);
  if (s3_den > 0.0) {
    t.s3 = root_m(2.0 * mg * (1.0 + a * p.K * p.h) / s3_den, m);
  } else {
    t.notes.emplace_back("s3: d - K alpha (1-c)(theta - h d) <= 0 (c <= c1)");
  }
  const auto gh = interior_constants(p);
  if (!gh) {
    t.notes.emplace_back("s4, s5, G, H: theta <= h d, no interior fixed point");
    return t;
  }
  t.G = gh->G;
  t.H = gh->H;
  if (gh->G > 0.0 && gh->H > 0.0) {
    t.s4 = root_m(mg * gh->G / gh->H, m);
  } else {
    t.notes.emplace_back("s4: requires G > 0 and H > 0");
  }
  if (gh->G > 0.0) {
    t.s5 = root_m(2.0 * mg / gh->G, m);
  } else {
    t.notes.emplace_back("s5: requires G > 0");
  }
  return t;
}

std::string to_string(FixedPointType t) {
  switch (t) {
    case FixedPointType::stable:
      return "stable";
    case FixedPointType::saddle:
      return "saddle";
    case FixedPointType::source:
      return "source";
    case FixedPointType::nonhyperbolic:
      return "nonhyperbolic";
  }
  return "unknown";
}

std::vector<FixedPointReport> classify_fixed_points(const ModelParams& p, double s, FractionalOrder m) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("step size s must be > 0");
  const StepThresholds t = step_thresholds(p, m);
  const Thresholds ct = thresholds(p);
  std::vector<FixedPointReport> out;

  for (const Equilibrium& e : equilibria(p)) {
    if (!e.exists) continue;
    FixedPointReport rep = base_report(p, s, m, e);
    switch (e.kind) {
      case EquilibriumKind::trivial: {
        // Eigenvalues 1 + S r > 1 and 1 - S d, inside the circle iff s < s1.
        const int k = side(s, t.s1);
        rep.type = k == 0 ? FixedPointType::nonhyperbolic : (k < 0 ? FixedPointType::saddle : FixedPointType::source);
        break;
      }
      case EquilibriumKind::predator_free: {
        // Eigenvalues 1 - S r (inside iff s < s2) and 1 + S xi2 with
        // xi2 < 0 exactly when c > c1 (inside iff s < s3).
        if (ct.c1 && near(p.c, *ct.c1)) {
          rep.type = FixedPointType::nonhyperbolic;
          break;
        }
        const int k2 = side(s, t.s2);
        if (!t.s3) {
          rep.type = k2 == 0 ? FixedPointType::nonhyperbolic
                             : (k2 < 0 ? FixedPointType::saddle : FixedPointType::source);
          break;
        }
        const int k3 = side(s, t.s3);
        if (k2 == 0 || k3 == 0) {
          rep.type = FixedPointType::nonhyperbolic;
        } else if (k2 < 0 && k3 < 0) {
          rep.type = FixedPointType::stable;
        } else if (k2 > 0 && k3 > 0) {
          rep.type = FixedPointType::source;
        } else {
          rep.type = FixedPointType::saddle;
        }
        break;
      }
      case EquilibriumKind::interior: {
        const FixedPointType by_moduli = from_moduli(rep.eigenvalues);
        if (by_moduli == FixedPointType::nonhyperbolic) {
          rep.type = by_moduli;
        } else if (rep.q1 > 0.0 && rep.q2 > 0.0 && rep.q3 > 0.0) {
          rep.type = FixedPointType::stable;
        } else {
          rep.type = by_moduli == FixedPointType::stable ? FixedPointType::nonhyperbolic : by_moduli;
        }
        break;
      }
    }
    out.push_back(rep);
  }
  return out;
}

std::string to_string(BifurcationKind k) {
  switch (k) {
    case BifurcationKind::transcritical:
      return "transcritical";
    case BifurcationKind::flip:
      return "flip";
    case BifurcationKind::hopf:
      return "hopf";
  }
  return "unknown";
}

std::vector<BifurcationEvent> detect_structural_bifurcations(const ModelParams& p, FractionalOrder m) {
  constexpr double max_residual = 1e-8;
  p.validate();
  std::vector<BifurcationEvent> out;
  const Equilibrium e1{.kind = EquilibriumKind::predator_free, .point = State{p.K, 0.0}, .exists = true};

  const Thresholds ct = thresholds(p);
  if (ct.c1 && *ct.c1 >= 0.0 && *ct.c1 < 1.0) {
    const ModelParams at_c1 = p.with_c(*ct.c1);
    const StepThresholds t1 = step_thresholds(at_c1, m);

    // Eigenvalue through +1 independently of s; evaluate at s2 as a representative step.
    const Jacobian2 jt = discrete_jacobian(at_c1, *t1.s2, m, e1);
    const BifurcationEvent transcritical{.kind = BifurcationKind::transcritical,
                                         .fixed_point = EquilibriumKind::predator_free,
                                         .c = *ct.c1,
                                         .s = std::numeric_limits<double>::quiet_NaN(),
                                         .residual = std::fabs(1.0 - jt.trace() + jt.det())};
    if (transcritical.residual < max_residual) out.push_back(transcritical);

    if (t1.s5) {
      const Jacobian2 jf = discrete_jacobian(at_c1, *t1.s5, m, e1);
      const BifurcationEvent flip{.kind = BifurcationKind::flip,
                                  .fixed_point = EquilibriumKind::predator_free,
                                  .c = *ct.c1,
                                  .s = *t1.s5,
                                  .residual = std::fabs(1.0 + jf.trace() + jf.det())};
      if (flip.residual < max_residual) out.push_back(flip);
    }
  }

  const Equilibrium star = interior_equilibrium(p);
  const auto gh = interior_constants(p);
  if (star.exists && gh && gh->H > 0.0 && gh->G > 0.0 && gh->G < 2.0 * std::sqrt(gh->H)) {
    const double s4 = *step_thresholds(p, m).s4;
    const Jacobian2 jh = discrete_jacobian(p, s4, m, star);
    const BifurcationEvent hopf{.kind = BifurcationKind::hopf,
                                .fixed_point = EquilibriumKind::interior,
                                .c = p.c,
                                .s = s4,
                                .residual = std::fabs(1.0 - jh.det())};
    if (hopf.residual < max_residual) out.push_back(hopf);
  }
  return out;
}

}  // namespace fracdyn
