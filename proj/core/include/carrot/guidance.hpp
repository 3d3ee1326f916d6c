#pragma once

#include "carrot/errors.hpp"
#include "carrot/geometry.hpp"

namespace carrot {

enum class Law {
  P,     // u = k * heading_error * v_a
  PCte,  // u = k1 * heading_error * v_a - k2 * e
};

enum class Saturation {
  Symmetric,  // clamp to [-u_max, u_max]
  UpperOnly,  // clamp u > u_max only, negative commands pass through
};

struct GuidanceParams {
  double k = 0.5;      // P-law heading gain, also the kinematic heading-dynamics gain, 1/s
  double k1 = 0.5;     // P+CTE heading gain, 1/s
  double k2 = 35.0;    // cross-track gain, (m/s^2) per m
  double delta = 5.0;  // lookahead distance, m
  double u_max = 1.0;  // lateral command bound, m/s^2
  Law law = Law::P;
  Saturation saturation = Saturation::Symmetric;

  // Throws InvariantViolation unless k, k1, delta, u_max > 0 and k2 >= 0.
  void validate() const;
};

struct ControlOutput {
  double u = 0.0;      // command after saturation, m/s^2
  double u_raw = 0.0;  // command before saturation, m/s^2
  Angle psi_d;         // commanded heading
  double heading_error = 0.0;  // rad
};

// Clamps u_raw per the saturation mode. Throws NonFiniteInput for NaN/Inf
// arguments. Requires u_max > 0.
double saturate(double u_raw, double u_max, Saturation mode = Saturation::Symmetric);

// Command from a precomputed heading error (rad) and signed cross-track
// error (m). The cross-track term enters as -k2 * e so that a vehicle left
// of the path (e > 0) is pushed back toward it.
ControlOutput apply_law(double heading_error, double e, double v_a, const GuidanceParams& params);

// Proportional law on the wrapped heading error.
ControlOutput p_law(Angle psi_d, Angle psi, double v_a, const GuidanceParams& params);

// Proportional law augmented with the cross-track term. With k2 == 0 this
// coincides with p_law at gain k1.
ControlOutput p_cte_law(Angle psi_d, Angle psi, double e, double v_a, const GuidanceParams& params);

}  // namespace carrot
