#include <doctest.h>

#include <cmath>

#include "fracdyn/bifurcation.hpp"
#include "fracdyn/dataset.hpp"
#include "fracdyn/pece.hpp"
#include "fracdyn/stability.hpp"

using namespace fracdyn;

namespace {

SweepOptions fixed_options(std::size_t transient = 20000) {
  SweepOptions opt;
  opt.mode = SweepMode::fixed_initial;
  opt.transient = transient;
  opt.n_samples = 200;
  return opt;
}

// Late-time oscillation amplitude of x around the interior equilibrium over the last 20% of the run.
double late_amplitude(const ModelParams& p, double m, double horizon) {
  const State star = interior_equilibrium(p).point;
  SolverConfig cfg;
  cfg.step = 0.05;
  cfg.horizon = horizon;
  const Trajectory traj = pece_solve(
      [&](State s) {
        const Rates f = rhs(p, s);
        return State{f.dx, f.dy};
      },
      State{star.x * 1.01, star.y * 1.01}, FractionalOrder(m), cfg);
  double amp = 0.0;
  for (std::size_t i = traj.states.size() * 4 / 5; i < traj.states.size(); ++i) {
    amp = std::fmax(amp, std::fabs(traj.states[i].x - star.x));
  }
  return amp;
}

}  // namespace

TEST_CASE("step-size sweep shows Hopf onset near s4") {
  const ModelParams p = ModelParams::reference(0.45);
  const SweepResult res = sweep_step_size(p, FractionalOrder(0.95), 0.1, 0.6, 51, State{10, 5}, fixed_options());
  REQUIRE(res.points.size() == 51);
  CHECK(res.parameter_name == "s");
  for (const SweepPoint& pt : res.points) {
    if (pt.escaped) continue;
    const std::size_t clusters = count_clusters(pt.samples);
    INFO("s = " << pt.value << " clusters = " << clusters);
    if (pt.value <= 0.19 + 1e-12) CHECK(clusters == 1);
    if (pt.value >= 0.20 - 1e-12 && pt.value <= 0.3) CHECK(clusters > 1);
  }
  bool hopf_event = false;
  for (const BifurcationEvent& e : res.events) hopf_event = hopf_event || e.kind == BifurcationKind::hopf;
  CHECK(hopf_event);
}

TEST_CASE("period-doubling window has at least four clusters somewhere") {
  const ModelParams p = ModelParams::reference(0.45);
  const SweepResult res = sweep_step_size(p, FractionalOrder(0.95), 0.48, 0.55, 36, State{10, 5}, fixed_options());
  std::size_t best = 0;
  for (const SweepPoint& pt : res.points) {
    if (!pt.escaped) best = std::max(best, count_clusters(pt.samples));
  }
  CHECK(best >= 4);
}

TEST_CASE("two-point grid gives two sample columns at the endpoints") {
  const ModelParams p = ModelParams::reference(0.45);
  const SweepResult res = sweep_step_size(p, FractionalOrder(0.95), 0.1, 0.3, 2, State{10, 5});
  REQUIRE(res.points.size() == 2);
  CHECK(res.parameter_values == std::vector<double>{0.1, 0.3});
  CHECK(res.points[0].samples.size() == 200);
  CHECK(res.points[1].samples.size() == 200);
}

TEST_CASE("sweeps are deterministic and independent of thread count") {
  const ModelParams p = ModelParams::reference(0.45);
  SweepOptions one = fixed_options(2000);
  one.threads = 1;
  SweepOptions many = fixed_options(2000);
  many.threads = 4;
  const SweepResult a = sweep_step_size(p, FractionalOrder(0.95), 0.1, 0.6, 21, State{10, 5}, one);
  const SweepResult b = sweep_step_size(p, FractionalOrder(0.95), 0.1, 0.6, 21, State{10, 5}, many);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].value == b.points[i].value);
    CHECK(a.points[i].samples == b.points[i].samples);
  }
  const SweepResult f1 = sweep_step_size(p, FractionalOrder(0.95), 0.1, 0.6, 21, State{10, 5});
  const SweepResult f2 = sweep_step_size(p, FractionalOrder(0.95), 0.1, 0.6, 21, State{10, 5});
  for (std::size_t i = 0; i < f1.points.size(); ++i) CHECK(f1.points[i].samples == f2.points[i].samples);
}

TEST_CASE("parameter values are strictly increasing") {
  const ModelParams p = ModelParams::reference(0.45);
  const SweepResult res = sweep_order(p, 0.15, 0.5, 1.0, 11, State{10, 5});
  CHECK(res.parameter_name == "m");
  for (std::size_t i = 1; i < res.parameter_values.size(); ++i) {
    CHECK(res.parameter_values[i] > res.parameter_values[i - 1]);
  }
  CHECK(res.parameter_values.back() == 1.0);
}

TEST_CASE("sweep arguments are validated") {
  const ModelParams p = ModelParams::reference(0.45);
  CHECK_THROWS_AS((void)sweep_step_size(p, FractionalOrder(0.95), 0.3, 0.1, 5, State{10, 5}), DomainError);
  CHECK_THROWS_AS((void)sweep_step_size(p, FractionalOrder(0.95), 0.0, 0.1, 5, State{10, 5}), DomainError);
  CHECK_THROWS_AS((void)sweep_step_size(p, FractionalOrder(0.95), 0.1, 0.3, 1, State{10, 5}), DomainError);
  CHECK_THROWS_AS((void)sweep_order(p, 0.1, 0.5, 1.2, 5, State{10, 5}), DomainError);
}

TEST_CASE("cluster counting") {
  CHECK(count_clusters({}) == 0);
  CHECK(count_clusters({{1, 1}, {1, 1}, {1, 1 + 1e-7}}) == 1);
  CHECK(count_clusters({{100, 50}, {200, 60}, {100, 50}, {200, 60}}) == 2);
}

TEST_CASE("phase portraits show point, ring and band structure") {
  const ModelParams p = ModelParams::reference(0.45);
  auto attractor = [&](double s) {
    const DiscreteConfig cfg{.s = s, .m = FractionalOrder(0.95), .iterations = 21000, .transient = 20000};
    DiscreteOrbit o = iterate_orbit(p, cfg, State{10, 5});
    std::vector<State> tail(o.states.begin() + static_cast<std::ptrdiff_t>(cfg.transient), o.states.end());
    return classify_attractor(tail, o.escaped);
  };
  CHECK(attractor(0.15).shape == AttractorShape::point);
  const AttractorSummary ring = attractor(0.25);
  CHECK(ring.shape == AttractorShape::ring);
  CHECK(ring.radius_min > 0.1 * ring.radius_mean);
  const AttractorSummary bands = attractor(0.5);
  CHECK(bands.shape == AttractorShape::bands);
  CHECK(bands.clusters > 1);
}

TEST_CASE("stability region at low complexity") {
  const ModelParams p = ModelParams::reference();
  const StabilityRegion region = stability_region_cm(p, {0.05}, 1e-3);
  REQUIRE(region.boundary.size() == 1);
  CHECK(std::fabs(region.boundary[0].m_star - 0.9898) < 5e-4);
  CHECK(region.boundary[0].verified);
}

TEST_CASE("stability region boundary is monotone and tends to one near c2") {
  const ModelParams p = ModelParams::reference();
  const double c2 = *thresholds(p).c2;
  std::vector<double> grid;
  for (int i = 1; i < 60; ++i) grid.push_back(c2 * i / 60.0);
  const StabilityRegion region = stability_region_cm(p, grid, 1e-3);
  REQUIRE(region.boundary.size() == grid.size());
  for (std::size_t i = 1; i < region.boundary.size(); ++i) {
    CHECK(region.boundary[i].m_star >= region.boundary[i - 1].m_star - 1e-6);
  }
  double prev = 0.0;
  for (double gap : {1e-2, 1e-3, 1e-4, 1e-6}) {
    const StabilityRegion near = stability_region_cm(p, {c2 - gap}, 1e-3);
    REQUIRE(near.boundary.size() == 1);
    const double m_star = near.boundary[0].m_star;
    CHECK(m_star < 1.0);
    CHECK(m_star > prev);
    prev = m_star;
  }
  CHECK(prev > 0.999);
}

TEST_CASE("stability region skips values outside (0, c2)") {
  const ModelParams p = ModelParams::reference();
  const StabilityRegion region = stability_region_cm(p, {0.0, 0.05, 0.2, 0.9}, 1e-3);
  CHECK(region.boundary.size() == 1);
  CHECK(region.skipped.size() == 3);
  for (const RegionSkip& s : region.skipped) CHECK_FALSE(s.reason.empty());
}

TEST_CASE("simulations straddling the boundary converge below and oscillate above") {
  const ModelParams base = ModelParams::reference();
  for (double c : {0.02, 0.05, 0.08}) {
    const ModelParams p = base.with_c(c);
    const double m_star = *critical_order(p).m_star;
    const double above = std::fmin(1.0, m_star + 0.02);
    const double a_low = late_amplitude(p, m_star - 0.02, 300.0);
    const double a_high = late_amplitude(p, above, 300.0);
    INFO("c = " << c << " m* = " << m_star << " amplitudes " << a_low << " " << a_high);
    CHECK(a_low < 0.01 * interior_equilibrium(p).point.x);
    CHECK(a_high > 0.01 * interior_equilibrium(p).point.x);
  }
}

TEST_CASE("series export shapes and CSV round trip") {
  SolverConfig cfg;
  cfg.step = 0.5;
  cfg.horizon = 1.0;
  const ModelParams p = ModelParams::reference(0.45);
  const Trajectory traj = pece_solve(
      [&](State s) {
        const Rates f = rhs(p, s);
        return State{f.dx, f.dy};
      },
      State{10, 5}, FractionalOrder(0.9), cfg);
  const Dataset ts = export_series(traj);
  CHECK(ts.header == std::vector<std::string>{"t", "x", "y"});
  CHECK(ts.rows.size() == 3);
  const Dataset phase = export_series(traj, SeriesFormat::phase);
  CHECK(phase.header == std::vector<std::string>{"x", "y"});

  const DiscreteOrbit orbit = iterate_orbit(
      p, DiscreteConfig{.s = 0.3, .m = FractionalOrder(0.95), .iterations = 50, .transient = 0}, State{10, 5});
  const Dataset od = export_series(orbit);
  CHECK(od.header == std::vector<std::string>{"n", "x", "y"});
  CHECK(od.rows.size() == 51);

  const Dataset back = parse_csv(to_csv(od));
  CHECK(back.header == od.header);
  REQUIRE(back.rows.size() == od.rows.size());
  for (std::size_t i = 0; i < od.rows.size(); ++i) {
    for (std::size_t j = 0; j < od.rows[i].size(); ++j) {
      CHECK(format_number(back.rows[i][j]) == format_number(od.rows[i][j]));
      CHECK(std::fabs(back.rows[i][j] - od.rows[i][j]) <= 1e-14 * std::fabs(od.rows[i][j]));
    }
  }

  const Dataset empty = export_series(Trajectory{});
  CHECK(empty.rows.empty());
  CHECK(empty.header.size() == 3);
  CHECK_THROWS_AS((void)parse_csv("a,b\n1,2,3\n"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_csv("a,b\n1,zz\n"), std::invalid_argument);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(253.9056) == "253.9056");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
}
