#include "fracdyn/bifurcation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "fracdyn/errors.hpp"
#include "fracdyn/stability.hpp"

namespace fracdyn {

namespace {

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return grid;
}

SweepPoint sample_point(const ModelParams& p, double s, FractionalOrder m, State x0, const SweepOptions& opt) {
  const DiscreteConfig cfg{.s = s, .m = m, .iterations = opt.transient + opt.n_samples, .transient = opt.transient};
  const DiscreteOrbit orbit = iterate_orbit(p, cfg, x0);
  SweepPoint pt;
  pt.escaped = orbit.escaped;
  if (orbit.states.size() > opt.transient + 1) {
    pt.samples.assign(orbit.states.begin() + static_cast<std::ptrdiff_t>(opt.transient + 1), orbit.states.end());
  }
  return pt;
}

// `point_at(i, x0)` computes grid point i from initial state x0.
template <class PointAt>
std::vector<SweepPoint> run_grid(std::size_t n, State x0, const SweepOptions& opt, PointAt point_at) {
  std::vector<SweepPoint> points(n);
  if (opt.mode == SweepMode::follow_attractor) {
    State start = x0;
    for (std::size_t i = 0; i < n; ++i) {
      points[i] = point_at(i, start);
      // After an escape, restart the next point from the configured initial state.
      start = points[i].escaped || points[i].samples.empty() ? x0 : points[i].samples.back();
    }
    return points;
  }

  unsigned workers = opt.threads != 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        points[i] = point_at(i, x0);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return points;
}

void check_sweep(std::size_t n_points, const SweepOptions& opt) {
  if (n_points < 2) throw DomainError("sweep needs n_points >= 2");
  if (opt.n_samples < 1) throw DomainError("sweep needs n_samples >= 1");
}

}  // namespace

SweepResult sweep_step_size(const ModelParams& p, FractionalOrder m, double s_min, double s_max,
                            std::size_t n_points, State x0, const SweepOptions& options) {
  p.validate();
  check_sweep(n_points, options);
  if (!(s_min > 0.0 && s_max > s_min)) throw DomainError("sweep needs 0 < s_min < s_max");

  SweepResult out;
  out.parameter_name = "s";
  out.parameter_values = uniform_grid(s_min, s_max, n_points);
  out.points = run_grid(n_points, x0, options, [&](std::size_t i, State start) {
    SweepPoint pt = sample_point(p, out.parameter_values[i], m, start, options);
    pt.value = out.parameter_values[i];
    return pt;
  });
  out.events = detect_structural_bifurcations(p, m);
  return out;
}

SweepResult sweep_order(const ModelParams& p, double s, double m_min, double m_max, std::size_t n_points,
                        State x0, const SweepOptions& options) {
  p.validate();
  check_sweep(n_points, options);
  if (!(m_min > 0.0 && m_max > m_min && m_max <= 1.0)) throw DomainError("sweep needs 0 < m_min < m_max <= 1");
  if (!(s > 0.0)) throw DomainError("step size s must be > 0");

  SweepResult out;
  out.parameter_name = "m";
  out.parameter_values = uniform_grid(m_min, m_max, n_points);
  out.points = run_grid(n_points, x0, options, [&](std::size_t i, State start) {
    SweepPoint pt = sample_point(p, s, FractionalOrder(out.parameter_values[i]), start, options);
    pt.value = out.parameter_values[i];
    return pt;
  });
  return out;
}

std::size_t count_clusters(const std::vector<State>& samples, double rel_radius) {
  if (samples.empty()) return 0;
  double scale = 1.0;
  for (const State& s : samples) scale = std::max({scale, std::fabs(s.x), std::fabs(s.y)});
  const double radius = rel_radius * scale;

  std::vector<State> centers;
  for (const State& s : samples) {
    const bool joined = std::any_of(centers.begin(), centers.end(),
                                    [&](const State& c) { return distance_inf(c, s) <= radius; });
    if (!joined) centers.push_back(s);
  }
  return centers.size();
}

std::string to_string(AttractorShape shape) {
  switch (shape) {
    case AttractorShape::point:
      return "point";
    case AttractorShape::cycle:
      return "cycle";
    case AttractorShape::ring:
      return "ring";
    case AttractorShape::bands:
      return "bands";
    case AttractorShape::escaped:
      return "escaped";
  }
  return "unknown";
}

AttractorSummary classify_attractor(const std::vector<State>& samples, bool escaped) {
  AttractorSummary sum;
  if (escaped || samples.empty()) {
    sum.shape = AttractorShape::escaped;
    return sum;
  }
  const double n = static_cast<double>(samples.size());
  for (const State& s : samples) {
    sum.centroid.x += s.x / n;
    sum.centroid.y += s.y / n;
  }
  sum.radius_min = std::numeric_limits<double>::infinity();
  for (const State& s : samples) {
    const double r = std::hypot(s.x - sum.centroid.x, s.y - sum.centroid.y);
    sum.radius_min = std::min(sum.radius_min, r);
    sum.radius_max = std::max(sum.radius_max, r);
    sum.radius_mean += r / n;
  }
  sum.clusters = count_clusters(samples);

  if (sum.clusters == 1) {
    sum.shape = AttractorShape::point;
  } else if (sum.clusters * 4 <= samples.size()) {
    sum.shape = AttractorShape::cycle;
  } else if (static_cast<double>(sum.clusters) > 0.9 * n && sum.radius_min > 0.1 * sum.radius_mean) {
    sum.shape = AttractorShape::ring;
  } else {
    sum.shape = AttractorShape::bands;
  }
  return sum;
}

StabilityRegion stability_region_cm(const ModelParams& p, const std::vector<double>& c_grid, double tolerance) {
  p.validate();
  if (!(tolerance > 0.0)) throw DomainError("region tolerance must be > 0");
  const Thresholds t = thresholds(p);
  StabilityRegion out;
  for (double c : c_grid) {
    if (!t.c2) {
      out.skipped.push_back({c, "c2 undefined (needs theta > h d and alpha K h > 1)"});
      continue;
    }
    if (!(c > 0.0 && c < *t.c2)) {
      out.skipped.push_back({c, "c outside (0, c2)"});
      continue;
    }
    const ModelParams pc = p.with_c(c);
    const CriticalOrder co = critical_order(pc);
    if (!co.m_star || co.reason != CriticalOrderReason::hopf) {
      out.skipped.push_back({c, co.reason == CriticalOrderReason::unstable_for_all_orders
                                    ? "no critical order: unstable for all m"
                                    : "no critical order: stable for all m"});
      continue;
    }
    RegionPoint pt{.c = c, .m_star = *co.m_star, .verified = false};
    const EigenPair eigs = equilibrium_jacobian(pc, interior_equilibrium(pc)).eigenvalues();
    const double below = pt.m_star - tolerance;
    const double above = pt.m_star + tolerance;
    if (below > 0.0 && above <= 1.0) {
      pt.verified = matignon_verdict(eigs, FractionalOrder(below)) == Verdict::stable &&
                    matignon_verdict(eigs, FractionalOrder(above)) == Verdict::unstable;
    } else if (below > 0.0) {
      pt.verified = matignon_verdict(eigs, FractionalOrder(below)) == Verdict::stable &&
                    matignon_verdict(eigs, FractionalOrder(1.0)) != Verdict::stable;
    }
    out.boundary.push_back(pt);
  }
  return out;
}

}  // namespace fracdyn
