#pragma once

#include "carrot/geometry.hpp"

namespace carrot {

/// Pose plus constant speed. v_a stays fixed over a run.
struct VehicleState {
  Point2 position;
  Angle psi;          // heading
  double v_a = 25.0;  // m/s
  double t = 0.0;     // s
};

// Explicit Euler step of the first-order heading dynamics
//   psi' = k * wrap(psi_d - psi)
// with the position advanced using the pre-step heading. Speed is preserved
// exactly: the position moves by v_a * dt along the old heading.
VehicleState step_kinematic(const VehicleState& state, Angle psi_d, double k, double dt);

// Replicates the reference formulation's update: the heading snaps to psi_d,
// the lateral command perturbs v_y directly, and v_x is recovered from the
// speed constraint. v_y is clamped to [-v_a, v_a] so the square root cannot
// leave its domain (the original update produces NaN there).
//   psi   := psi_d
//   v_y   := v_a * sin(psi) + u * dt      (then clamped)
//   v_x   := sqrt(v_a^2 - v_y^2)
//   pos   += (v_x, v_y) * dt
VehicleState step_reference(const VehicleState& state, Angle psi_d, double u, double dt);

}  // namespace carrot
