#pragma once

#include <cmath>
#include <string>

#include "fracdyn/errors.hpp"

namespace fracdyn {

/// Order m of the Caputo derivative, restricted to (0, 1].
class FractionalOrder {
 public:
  explicit FractionalOrder(double m) : m_(m) {
    if (!(m > 0.0 && m <= 1.0)) {
      throw DomainError("fractional order must satisfy 0 < m <= 1, got " + std::to_string(m));
    }
  }

  [[nodiscard]] double value() const noexcept { return m_; }
  [[nodiscard]] bool is_integer() const noexcept { return m_ == 1.0; }

  friend bool operator==(FractionalOrder, FractionalOrder) = default;

 private:
  double m_;
};

/// Prey density x and predator density y.
struct State {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const State&, const State&) = default;
};

[[nodiscard]] inline bool is_finite(State s) noexcept {
  return std::isfinite(s.x) && std::isfinite(s.y);
}

[[nodiscard]] inline bool in_nonnegative_quadrant(State s) noexcept {
  return is_finite(s) && s.x >= 0.0 && s.y >= 0.0;
}

/// Max-norm distance between two states.
[[nodiscard]] inline double distance_inf(State a, State b) noexcept {
  return std::fmax(std::fabs(a.x - b.x), std::fabs(a.y - b.y));
}

}  // namespace fracdyn
