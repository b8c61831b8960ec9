#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "fracdyn/errors.hpp"
#include "fracdyn/model.hpp"
#include "fracdyn/pece.hpp"
#include "fracdyn/stability.hpp"

using namespace fracdyn;

namespace {

using cd = std::complex<double>;

EigenPair pair_of(cd a, cd b) { return EigenPair{a, b}; }

const StabilityReport& report_for(const std::vector<StabilityReport>& reports, EquilibriumKind kind) {
  for (const StabilityReport& r : reports) {
    if (r.equilibrium.kind == kind) return r;
  }
  throw std::runtime_error("equilibrium missing from report");
}

Trajectory simulate(const ModelParams& p, State x0, double m, double horizon) {
  SolverConfig cfg;
  cfg.step = 0.05;
  cfg.horizon = horizon;
  return pece_solve(
      [&](State s) {
        const Rates f = rhs(p, s);
        return State{f.dx, f.dy};
      },
      x0, FractionalOrder(m), cfg);
}

// Ratio of the late-time distance from `target` to the initial perturbation size.
double growth_ratio(const ModelParams& p, State target, double m, double horizon) {
  const State x0{target.x * (1.0 + 1e-3), target.y * (1.0 + 1e-3) + 1e-3};
  const Trajectory traj = simulate(p, x0, m, horizon);
  const double initial = distance_inf(x0, target);
  double late = 0.0;
  const std::size_t window = traj.states.size() / 10;
  for (std::size_t i = traj.states.size() - window; i < traj.states.size(); ++i) {
    late = std::fmax(late, distance_inf(traj.states[i], target));
  }
  return late / initial;
}

}  // namespace

TEST_CASE("Matignon test on reference eigenvalues") {
  CHECK(matignon_stable(pair_of({-1, 0}, {-2, 0}), FractionalOrder(1.0)));
  CHECK(matignon_stable(pair_of({-1, 0}, {-2, 0}), FractionalOrder(0.3)));
  CHECK_FALSE(matignon_stable(pair_of({0.1, 1}, {0.1, -1}), FractionalOrder(1.0)));
  CHECK(matignon_stable(pair_of({0.1, 1}, {0.1, -1}), FractionalOrder(0.9)));
  CHECK_FALSE(matignon_stable(pair_of({2, 0}, {-1, 0}), FractionalOrder(0.5)));
}

TEST_CASE("Matignon test flags the boundary as nonhyperbolic") {
  CHECK(matignon_verdict(pair_of({0, 0}, {-1, 0}), FractionalOrder(0.5)) == Verdict::nonhyperbolic);
  CHECK_THROWS_AS((void)matignon_stable(pair_of({0, 0}, {-1, 0}), FractionalOrder(0.5)), NonhyperbolicError);
  // arg(i) = pi/2 is the boundary at m = 1.
  CHECK(matignon_verdict(pair_of({0, 1}, {0, -1}), FractionalOrder(1.0)) == Verdict::nonhyperbolic);
  const double phi = 0.7;
  const EigenPair on_ray = pair_of(std::polar(1.0, phi), std::polar(1.0, -phi));
  CHECK(matignon_verdict(on_ray, FractionalOrder(2.0 * phi / M_PI)) == Verdict::nonhyperbolic);
}

TEST_CASE("Routh-Hurwitz conditions on reference coefficients") {
  CHECK(routh_hurwitz_fractional(3.0, 2.0, FractionalOrder(0.4)));
  CHECK(routh_hurwitz_fractional(3.0, 2.0, FractionalOrder(1.0)));
  CHECK(routh_hurwitz_fractional(-0.0437, 1.8430, FractionalOrder(0.95)));
  CHECK_FALSE(routh_hurwitz_fractional(-0.0437, 1.8430, FractionalOrder(0.995)));
  CHECK_FALSE(routh_hurwitz_fractional(-3.0, 2.0, FractionalOrder(0.5)));
  CHECK_THROWS_AS((void)routh_hurwitz_fractional(1.0, 0.0, FractionalOrder(0.5)), NonhyperbolicError);
}

TEST_CASE("Routh-Hurwitz agrees with Matignon on random quadratics") {
  std::mt19937_64 rng(1357911);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (double m : {0.3, 0.6, 0.9, 1.0}) {
    const FractionalOrder order(m);
    for (int trial = 0; trial < 1000; ++trial) {
      const double a1 = u(rng);
      double a2 = u(rng);
      if (a2 == 0.0) a2 = 1.0;
      const EigenPair roots = eigenvalues_from(-a1, a2);
      INFO("m = " << m << " a1 = " << a1 << " a2 = " << a2);
      CHECK(routh_hurwitz_verdict(a1, a2, order) == matignon_verdict(roots, order));
    }
  }
}

TEST_CASE("instability persists as the order grows") {
  std::mt19937_64 rng(2468);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    const EigenPair eig = eigenvalues_from(u(rng), u(rng));
    bool unstable_seen = false;
    for (double m = 0.05; m <= 1.0 + 1e-12; m += 0.05) {
      const Verdict v = matignon_verdict(eig, FractionalOrder(std::fmin(m, 1.0)));
      if (unstable_seen) CHECK(v == Verdict::unstable);
      unstable_seen = unstable_seen || v == Verdict::unstable;
    }
  }
}

TEST_CASE("critical order for the low-complexity case") {
  const ModelParams p = ModelParams::reference(0.05);
  const CriticalOrder co = critical_order(p);
  REQUIRE(co.m_star);
  CHECK(co.reason == CriticalOrderReason::hopf);
  CHECK(std::fabs(*co.m_star - 0.9898) < 5e-4);

  const EigenPair eig = equilibrium_jacobian(p, interior_equilibrium(p)).eigenvalues();
  CHECK(matignon_stable(eig, FractionalOrder(*co.m_star - 1e-3)));
  CHECK_FALSE(matignon_stable(eig, FractionalOrder(*co.m_star + 1e-3)));
  CHECK(matignon_verdict(eig, FractionalOrder(*co.m_star)) == Verdict::nonhyperbolic);
}

TEST_CASE("critical order is absent with a negative trace and undefined without E*") {
  const CriticalOrder co = critical_order(ModelParams::reference(0.45));
  CHECK_FALSE(co.m_star);
  CHECK(co.reason == CriticalOrderReason::stable_for_all_orders);
  CHECK(std::fabs(co.trace - (-0.3398)) < 1e-3);
  CHECK_THROWS_AS((void)critical_order(ModelParams::reference(0.86)), DomainError);
}

TEST_CASE("classification of the reference examples") {
  for (double m : {0.3, 0.75, 0.95, 1.0}) {
    const auto reports = classify_equilibria(ModelParams::reference(0.86), FractionalOrder(m));
    CHECK(reports.size() == 2);
    CHECK(report_for(reports, EquilibriumKind::trivial).classification == Classification::saddle);
    CHECK(report_for(reports, EquilibriumKind::predator_free).classification == Classification::stable);
  }

  const auto star = classify_equilibria(ModelParams::reference(0.45), FractionalOrder(0.9));
  REQUIRE(star.size() == 3);
  const StabilityReport& s45 = report_for(star, EquilibriumKind::interior);
  CHECK(s45.classification == Classification::stable);
  CHECK(report_for(star, EquilibriumKind::predator_free).classification == Classification::saddle);
  CHECK(s45.valid_orders.contains(0.2));
  CHECK(s45.valid_orders.contains(1.0));

  const auto low = classify_equilibria(ModelParams::reference(0.05), FractionalOrder(0.995));
  const StabilityReport& s05 = report_for(low, EquilibriumKind::interior);
  CHECK(s05.classification == Classification::unstable);
  REQUIRE(s05.m_star);
  CHECK(s05.valid_orders.contains(0.995));
  CHECK_FALSE(s05.valid_orders.contains(0.95));
  CHECK_FALSE(s05.valid_orders.contains(*s05.m_star));

  const auto below = classify_equilibria(ModelParams::reference(0.05), FractionalOrder(0.95));
  const StabilityReport& b05 = report_for(below, EquilibriumKind::interior);
  CHECK(b05.classification == Classification::stable);
  CHECK(b05.valid_orders.contains(0.95));
  CHECK_FALSE(b05.valid_orders.contains(0.995));
}

TEST_CASE("classification at the critical order is nonhyperbolic") {
  const ModelParams p = ModelParams::reference(0.05);
  const double m_star = *critical_order(p).m_star;
  const auto reports = classify_equilibria(p, FractionalOrder(m_star));
  CHECK(report_for(reports, EquilibriumKind::interior).classification == Classification::nonhyperbolic);
}

TEST_CASE("global stability sufficient conditions") {
  const GlobalStabilityFlags high = global_stability_check(ModelParams::reference(0.86));
  CHECK(high.predator_free_global);
  CHECK_FALSE(high.interior_global);
  const GlobalStabilityFlags mid = global_stability_check(ModelParams::reference(0.45));
  CHECK_FALSE(mid.predator_free_global);
  CHECK(mid.interior_global);
  const GlobalStabilityFlags low = global_stability_check(ModelParams::reference(0.05));
  CHECK_FALSE(low.predator_free_global);
  CHECK_FALSE(low.interior_global);
}

TEST_CASE("boundedness envelope limits") {
  const ModelParams p = ModelParams::reference(0.86);
  const double eta = p.d / 2.0;
  CHECK(boundedness_envelope(p, FractionalOrder(0.9), eta, 37.0, 0.0) == 37.0);
  const double l = p.K * (p.r + eta) * (p.r + eta) / (4.0 * p.r);
  CHECK(std::fabs(boundedness_envelope(p, FractionalOrder(1.0), eta, 37.0, 200.0) - l / eta) < 1e-6);
  CHECK_THROWS_AS((void)boundedness_envelope(p, FractionalOrder(0.9), p.d, 37.0, 1.0), DomainError);
  CHECK_THROWS_AS((void)boundedness_envelope(p, FractionalOrder(0.9), 0.0, 37.0, 1.0), DomainError);
  CHECK_THROWS_AS((void)boundedness_envelope(p, FractionalOrder(0.9), eta, -1.0, 1.0), DomainError);
}

TEST_CASE("envelope dominates the simulated functional") {
  struct Case {
    double c;
    double m;
  };
  for (const Case k : {Case{0.86, 0.9}, Case{0.45, 0.85}, Case{0.05, 0.95}}) {
    const ModelParams p = ModelParams::reference(k.c);
    const FractionalOrder m(k.m);
    const double eta = p.d / 2.0;
    const State x0{10.0, 5.0};
    const double v0 = envelope_functional(p, x0);
    const Trajectory traj = simulate(p, x0, k.m, 100.0);
    for (std::size_t i = 0; i < traj.states.size(); i += 5) {
      CHECK(envelope_functional(p, traj.states[i]) <= boundedness_envelope(p, m, eta, v0, traj.times[i]) + 1e-6);
    }
  }
}

TEST_CASE("simulation near each equilibrium agrees with the classification") {
  struct Case {
    double c;
    double m;
    EquilibriumKind kind;
  };
  for (const Case k : {Case{0.86, 0.95, EquilibriumKind::predator_free}, Case{0.45, 0.9, EquilibriumKind::interior},
                       Case{0.05, 0.95, EquilibriumKind::interior}, Case{0.05, 0.995, EquilibriumKind::interior}}) {
    const ModelParams p = ModelParams::reference(k.c);
    const StabilityReport& rep = report_for(classify_equilibria(p, FractionalOrder(k.m)), k.kind);
    const double ratio = growth_ratio(p, rep.equilibrium.point, k.m, 300.0);
    INFO("c = " << k.c << " m = " << k.m << " ratio = " << ratio);
    if (rep.classification == Classification::stable) {
      CHECK(ratio < 1.0);
    } else {
      CHECK(ratio > 1.0);
    }
  }
}
