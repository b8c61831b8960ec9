#include <cmath>
#include <complex>
#include <limits>

#include "fracdyn/discrete_map.hpp"
#include "fracdyn/errors.hpp"

namespace fracdyn {

namespace {

bool distinct(double a, double b) { return std::fabs(a - b) > 1e-9 * std::fmax(std::fabs(a), std::fabs(b)); }

}  // namespace

NormalFormData hopf_normal_form(const ModelParams& p, FractionalOrder m) {
  const Equilibrium star = interior_equilibrium(p);
  if (!star.exists) throw PreconditionError("Hopf normal form: interior fixed point does not exist");
  const InteriorConstants gh = *interior_constants(p);
  if (!(gh.H > 0.0)) throw PreconditionError("Hopf normal form: H > 0 fails (requires c < c1)");
  if (!(gh.G > 0.0)) throw PreconditionError("Hopf normal form: 0 < G fails");
  if (!(gh.G < 2.0 * std::sqrt(gh.H))) throw PreconditionError("Hopf normal form: G < 2 sqrt(H) fails");

  const double G = gh.G;
  const double H = gh.H;
  const double a = p.effective_attack();
  const double hd = p.h * p.d;
  const double x = star.point.x;

  NormalFormData nf;
  nf.s4 = *step_thresholds(p, m).s4;
  nf.S1 = map_gain(nf.s4, m);
  const double S1 = nf.S1;

  nf.c11 = 1.0 - S1 * G;
  nf.c12 = -S1 * a * (p.theta - hd) * x / p.theta;
  nf.c21 = S1 * p.r * (p.theta - hd) * (p.K - x) / p.K;
  nf.c22 = 1.0;
  const double denom = 1.0 + a * p.h * x;
  nf.c13 = -a * S1 / (2.0 * denom * denom);
  nf.c23 = p.theta * a * S1 / (2.0 * denom * denom);

  nf.delta = 0.5 * (2.0 - S1 * G);
  nf.beta = 0.5 * S1 * std::sqrt(4.0 * H - G * G);
  const std::complex<double> l1(nf.delta, nf.beta);
  const std::complex<double> l2(nf.delta, -nf.beta);
  nf.lambda = {l1, l2};
  nf.transversality = G / 2.0;
  nf.nonresonance_ok = distinct(G * G, 3.0 * H) && distinct(G * G, 2.0 * H);

  const double dc = nf.delta - nf.c11;
  const double kq = (nf.c11 - nf.delta) * nf.c13 + nf.c12 * nf.c23;
  NormalFormPartials& d = nf.partials;
  d.p_uu = 2.0 * nf.c13 * dc;
  d.p_vv = 0.0;
  d.p_uv = -nf.beta * nf.c13;
  d.q_uu = 2.0 * kq * (nf.c11 - nf.delta) / nf.beta;
  d.q_vv = 0.0;
  d.q_uv = kq;

  using cd = std::complex<double>;
  nf.xi11 = 0.25 * cd(d.p_uu + d.p_vv, d.q_uu + d.q_vv);
  nf.xi20 = 0.125 * cd(d.p_uu - d.p_vv + 2.0 * d.q_uv, d.q_uu - d.q_vv - 2.0 * d.p_uv);
  nf.xi02 = 0.125 * cd(d.p_uu - d.p_vv - 2.0 * d.q_uv, d.q_uu - d.q_vv + 2.0 * d.p_uv);
  nf.xi21 = cd(0.0, 0.0);  // every third partial of P and Q vanishes

  const cd lead = (1.0 - 2.0 * l1) * l2 * l2 / (1.0 - l1) * nf.xi11 * nf.xi20;
  nf.gamma = -lead.real() - 0.5 * std::norm(nf.xi11) - std::norm(nf.xi02) + (l2 * nf.xi21).real();
  return nf;
}

CriticalityEstimate estimate_hopf_criticality(const ModelParams& p, FractionalOrder m, double ds,
                                              std::size_t iterations, std::size_t averaging_window) {
  if (!(averaging_window >= 1 && averaging_window < iterations)) {
    throw DomainError("averaging window must satisfy 1 <= window < iterations");
  }
  const NormalFormData nf = hopf_normal_form(p, m);
  const Equilibrium star = interior_equilibrium(p);

  CriticalityEstimate est;
  est.s = nf.s4 + ds;
  const Jacobian2 j = discrete_jacobian(p, est.s, m, star);
  est.mu = std::sqrt(j.det()) - 1.0;

  const DiscreteConfig cfg{.s = est.s, .m = m, .iterations = iterations, .transient = iterations - averaging_window};
  const State x0{star.point.x * (1.0 + 1e-3), star.point.y * (1.0 + 1e-3)};
  const DiscreteOrbit orbit = iterate_orbit(p, cfg, x0);
  if (orbit.escaped) {
    est.escaped = true;
    est.l1 = std::numeric_limits<double>::quiet_NaN();
    return est;
  }

  // (X, Y) = T (u, v) with T = [[c12, 0], [delta - c11, -beta]].
  double sum = 0.0;
  for (std::size_t n = cfg.transient + 1; n < orbit.states.size(); ++n) {
    const double X = orbit.states[n].x - star.point.x;
    const double Y = orbit.states[n].y - star.point.y;
    const double u = X / nf.c12;
    const double v = ((nf.delta - nf.c11) * u - Y) / nf.beta;
    sum += std::hypot(u, v);
  }
  est.radius = sum / static_cast<double>(orbit.states.size() - cfg.transient - 1);
  est.l1 = -est.mu / (est.radius * est.radius);
  return est;
}

}  // namespace fracdyn
