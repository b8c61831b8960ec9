#include "fracdyn/pece.hpp"

namespace fracdyn {

Trajectory pece_solve(const VectorField& rhs, State x0, FractionalOrder order, const SolverConfig& cfg) {
  if (!in_nonnegative_quadrant(x0)) {
    throw DomainError("initial state must be finite and componentwise >= 0");
  }
  auto field = [&rhs](const std::array<double, 2>& u) {
    const State f = rhs(State{u[0], u[1]});
    return std::array<double, 2>{f.x, f.y};
  };
  const auto raw = pece_integrate<2>(field, std::array<double, 2>{x0.x, x0.y}, order, cfg);

  Trajectory out;
  out.order = raw.order;
  out.scheme = Scheme::pece;
  out.times = raw.times;
  out.states.reserve(raw.states.size());
  for (const auto& u : raw.states) out.states.push_back(State{u[0], u[1]});
  return out;
}

}  // namespace fracdyn
