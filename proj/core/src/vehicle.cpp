#include "carrot/vehicle.hpp"

#include <algorithm>
#include <cmath>

namespace carrot {

VehicleState step_kinematic(const VehicleState& state, Angle psi_d, double k, double dt) {
  const double herr = wrap_angle(psi_d.radians() - state.psi.radians()).radians();
  const double psi_dot = k * herr;

  VehicleState next = state;
  next.position.x = state.position.x + state.v_a * std::cos(state.psi.radians()) * dt;
  next.position.y = state.position.y + state.v_a * std::sin(state.psi.radians()) * dt;
  next.psi = wrap_angle(state.psi.radians() + psi_dot * dt);
  next.t = state.t + dt;
  return next;
}

VehicleState step_reference(const VehicleState& state, Angle psi_d, double u, double dt) {
  VehicleState next = state;
  next.psi = psi_d;
  double v_y = state.v_a * std::sin(psi_d.radians()) + u * dt;
  v_y = std::clamp(v_y, -state.v_a, state.v_a);
  const double v_x = std::sqrt(state.v_a * state.v_a - v_y * v_y);
  next.position.x = state.position.x + v_x * dt;
  next.position.y = state.position.y + v_y * dt;
  next.t = state.t + dt;
  return next;
}

}  // namespace carrot
