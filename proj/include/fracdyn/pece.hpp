#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracdyn/errors.hpp"
#include "fracdyn/special_functions.hpp"
#include "fracdyn/types.hpp"

namespace fracdyn {

struct SolverConfig {
  double step = 0.05;
  double horizon = 100.0;
  int corrector_sweeps = 1;
  /// Number of most recent history nodes kept in the memory sums; empty = full memory.
  std::optional<std::size_t> memory_window;
  /// Any |component| above this (or non-finite) aborts the run with DivergenceError.
  double blowup_bound = 1e12;

  void validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("solver step must be > 0");
    if (!(horizon >= step) || !std::isfinite(horizon)) throw DomainError("solver horizon must be >= step");
    if (corrector_sweeps < 1) throw DomainError("corrector_sweeps must be >= 1");
    if (memory_window && *memory_window == 0) throw DomainError("memory_window must be >= 1");
    if (!(blowup_bound > 0.0)) throw DomainError("blowup_bound must be > 0");
  }

  /// Number of steps on the uniform grid; the grid ends at the last node not beyond horizon.
  [[nodiscard]] std::size_t steps() const {
    return static_cast<std::size_t>(std::floor(horizon / step * (1.0 + 1e-12)));
  }
};

enum class Scheme { pece, discrete_map };

template <std::size_t N>
struct VectorTrajectory {
  FractionalOrder order{1.0};
  std::vector<double> times;
  std::vector<std::array<double, N>> states;
  Scheme scheme = Scheme::pece;
};

/// Fractional Adams-Bashforth-Moulton (PECE) scheme for D^m u = f(u), u(0) = u0, on the
/// uniform grid t_n = n h.
///
/// Predictor (fractional rectangle rule):
///   u^P_{n+1} = u0 + h^m / Gamma(m+1) * sum_{j<=n} b_{j,n+1} f_j,
///   b_{j,n+1} = (n+1-j)^m - (n-j)^m.
/// Corrector (fractional trapezoid rule), applied `corrector_sweeps` times:
///   u_{n+1} = u0 + h^m / Gamma(m+2) * (f(u^P_{n+1}) + sum_{j<=n} a_{j,n+1} f_j),
///   a_{0,n+1} = n^(m+1) - (n-m)(n+1)^m,
///   a_{j,n+1} = (n-j+2)^(m+1) + (n-j)^(m+1) - 2(n-j+1)^(m+1).
/// For m = 1 the weights are b = 1, a_0 = 1, a_j = 2: the integral form of the
/// explicit-Euler/trapezoid Adams pair.
///
/// Cost is O(N^2) in the number of steps unless `memory_window` truncates the history.
template <std::size_t N, class Rhs>
[[nodiscard]] VectorTrajectory<N> pece_integrate(Rhs&& rhs, const std::array<double, N>& u0, FractionalOrder order,
                                                 const SolverConfig& cfg) {
  cfg.validate();
  const double m = order.value();
  const double h = cfg.step;
  const std::size_t steps = cfg.steps();

  VectorTrajectory<N> out;
  out.order = order;
  out.scheme = Scheme::pece;
  out.times.reserve(steps + 1);
  out.states.reserve(steps + 1);
  out.times.push_back(0.0);
  out.states.push_back(u0);

  // k^m and k^(m+1) for k = 0 .. steps + 1.
  std::vector<double> pow_m(steps + 2);
  std::vector<double> pow_m1(steps + 2);
  for (std::size_t k = 0; k < pow_m.size(); ++k) {
    const double kd = static_cast<double>(k);
    pow_m[k] = std::pow(kd, m);
    pow_m1[k] = std::pow(kd, m + 1.0);
  }
  const double hm = std::pow(h, m);
  const double pred_scale = hm / gamma_fn(m + 1.0);
  const double corr_scale = hm / gamma_fn(m + 2.0);

  std::vector<std::array<double, N>> history;
  history.reserve(steps + 1);
  history.push_back(rhs(u0));

  auto check = [&](const std::array<double, N>& u, std::size_t n) {
    for (double v : u) {
      if (!std::isfinite(v) || std::fabs(v) > cfg.blowup_bound) {
        throw DivergenceError("PECE solution left the blow-up bound at step " + std::to_string(n), n,
                              static_cast<double>(n) * h);
      }
    }
  };

  for (std::size_t n = 0; n < steps; ++n) {
    const std::size_t first =
        cfg.memory_window && n + 1 > *cfg.memory_window ? n + 1 - *cfg.memory_window : 0;

    std::array<double, N> pred_sum{};
    std::array<double, N> corr_sum{};
    for (std::size_t j = first; j <= n; ++j) {
      const double b = pow_m[n + 1 - j] - pow_m[n - j];
      const double a = j == 0 ? pow_m1[n] - (static_cast<double>(n) - m) * pow_m[n + 1]
                              : pow_m1[n - j + 2] + pow_m1[n - j] - 2.0 * pow_m1[n - j + 1];
      const auto& f = history[j];
      for (std::size_t i = 0; i < N; ++i) {
        pred_sum[i] += b * f[i];
        corr_sum[i] += a * f[i];
      }
    }

    std::array<double, N> u{};
    for (std::size_t i = 0; i < N; ++i) u[i] = u0[i] + pred_scale * pred_sum[i];
    for (int sweep = 0; sweep < cfg.corrector_sweeps; ++sweep) {
      const auto f_pred = rhs(u);
      for (std::size_t i = 0; i < N; ++i) u[i] = u0[i] + corr_scale * (f_pred[i] + corr_sum[i]);
    }
    check(u, n + 1);

    out.times.push_back(static_cast<double>(n + 1) * h);
    out.states.push_back(u);
    history.push_back(rhs(u));
  }
  return out;
}

struct Trajectory {
  FractionalOrder order{1.0};
  std::vector<double> times;
  std::vector<State> states;
  Scheme scheme = Scheme::pece;
};

using VectorField = std::function<State(State)>;

/// Planar PECE solve; see pece_integrate. Initial state must lie in the nonnegative quadrant.
[[nodiscard]] Trajectory pece_solve(const VectorField& rhs, State x0, FractionalOrder order, const SolverConfig& cfg);

}  // namespace fracdyn
