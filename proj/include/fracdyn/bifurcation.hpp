#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fracdyn/discrete_map.hpp"
#include "fracdyn/model.hpp"
#include "fracdyn/types.hpp"

namespace fracdyn {

enum class SweepMode {
  /// Each grid point starts from the final state of the previous one (sequential).
  follow_attractor,
  /// Every grid point starts from x0; points are independent and run on worker threads.
  fixed_initial,
};

struct SweepOptions {
  SweepMode mode = SweepMode::follow_attractor;
  std::size_t transient = 2000;
  std::size_t n_samples = 200;
  /// Worker threads for fixed_initial mode; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct SweepPoint {
  double value = 0.0;
  /// Successive states after the transient; fewer than n_samples if the orbit escaped.
  std::vector<State> samples;
  bool escaped = false;
};

struct SweepResult {
  std::string parameter_name;
  std::vector<double> parameter_values;
  std::vector<SweepPoint> points;
  std::vector<BifurcationEvent> events;
};

/// Bifurcation diagram over the step size on the uniform grid s_min .. s_max (n_points nodes),
/// with analytic events from detect_structural_bifurcations overlaid.
[[nodiscard]] SweepResult sweep_step_size(const ModelParams& p, FractionalOrder m, double s_min, double s_max,
                                          std::size_t n_points, State x0, const SweepOptions& options = {});

/// Same as sweep_step_size with the fractional order as the parameter at fixed s.
/// Orders must lie in (0, 1].
[[nodiscard]] SweepResult sweep_order(const ModelParams& p, double s, double m_min, double m_max,
                                      std::size_t n_points, State x0, const SweepOptions& options = {});

/// Number of distinct clusters among the samples. Points closer than
/// rel_radius * max(1, max |component|) (max norm) to a cluster's first member join it.
[[nodiscard]] std::size_t count_clusters(const std::vector<State>& samples, double rel_radius = 1e-4);

enum class AttractorShape { point, cycle, ring, bands, escaped };

[[nodiscard]] std::string to_string(AttractorShape shape);

struct AttractorSummary {
  AttractorShape shape = AttractorShape::point;
  std::size_t clusters = 0;
  State centroid;
  /// Min, mean and max Euclidean distance of the samples from the centroid.
  double radius_min = 0.0;
  double radius_mean = 0.0;
  double radius_max = 0.0;
};

/// Structural summary of sampled attractor states:
///  - point: one cluster;
///  - cycle: at most n/4 clusters (a periodic orbit);
///  - ring: almost every sample distinct (> 90%) and the samples avoid the centroid
///    (min radius > 10% of the mean radius), as for an invariant circle;
///  - bands: anything else with more than one cluster.
[[nodiscard]] AttractorSummary classify_attractor(const std::vector<State>& samples, bool escaped = false);

struct RegionPoint {
  double c = 0.0;
  double m_star = 0.0;
  /// Matignon's test flips from stable to unstable across m* -+ tolerance.
  bool verified = false;
};

struct RegionSkip {
  double c = 0.0;
  std::string reason;
};

struct StabilityRegion {
  std::vector<RegionPoint> boundary;
  std::vector<RegionSkip> skipped;
};

/// m*(c) for each c of the grid inside (0, c2). Points outside, or without a critical order,
/// are listed in `skipped`. Below the curve the interior equilibrium is stable.
[[nodiscard]] StabilityRegion stability_region_cm(const ModelParams& p, const std::vector<double>& c_grid,
                                                  double tolerance = 1e-3);

}  // namespace fracdyn
