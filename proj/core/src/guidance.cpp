#include "carrot/guidance.hpp"

#include <algorithm>
#include <cmath>

namespace carrot {

void GuidanceParams::validate() const {
  if (!(k > 0.0)) throw InvariantViolation("guidance.k must be > 0");
  if (!(k1 > 0.0)) throw InvariantViolation("guidance.k1 must be > 0");
  if (!(k2 >= 0.0)) throw InvariantViolation("guidance.k2 must be >= 0");
  if (!(delta > 0.0)) throw InvariantViolation("guidance.delta must be > 0");
  if (!(u_max > 0.0)) throw InvariantViolation("guidance.u_max must be > 0");
}

double saturate(double u_raw, double u_max, Saturation mode) {
  if (!std::isfinite(u_raw) || !std::isfinite(u_max)) {
    throw NonFiniteInput("saturate: input is not finite");
  }
  if (mode == Saturation::UpperOnly) {
    return u_raw > u_max ? u_max : u_raw;
  }
  return std::clamp(u_raw, -u_max, u_max);
}

ControlOutput apply_law(double heading_error, double e, double v_a,
                        const GuidanceParams& params) {
  ControlOutput out;
  out.heading_error = heading_error;
  if (params.law == Law::P) {
    out.u_raw = params.k * heading_error * v_a;
  } else {
    out.u_raw = params.k1 * heading_error * v_a - params.k2 * e;
  }
  out.u = saturate(out.u_raw, params.u_max, params.saturation);
  return out;
}

ControlOutput p_law(Angle psi_d, Angle psi, double v_a, const GuidanceParams& params) {
  const double herr = wrap_angle(psi_d.radians() - psi.radians()).radians();
  GuidanceParams p = params;
  p.law = Law::P;
  ControlOutput out = apply_law(herr, 0.0, v_a, p);
  out.psi_d = psi_d;
  return out;
}

ControlOutput p_cte_law(Angle psi_d, Angle psi, double e, double v_a,
                        const GuidanceParams& params) {
  const double herr = wrap_angle(psi_d.radians() - psi.radians()).radians();
  GuidanceParams p = params;
  p.law = Law::PCte;
  ControlOutput out = apply_law(herr, e, v_a, p);
  out.psi_d = psi_d;
  return out;
}

}  // namespace carrot
