#pragma once

#include "carrot/errors.hpp"

namespace carrot {

// Points closer than this are treated as coincident (meters).
inline constexpr double kCoincidenceTolerance = 1e-9;

/// 2-D point, meters. Also used for waypoints.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point2 a, Point2 b);

/// Angle normalized to the half-open interval (-pi, pi].
class Angle {
 public:
  Angle() = default;

  // Wraps into (-pi, pi]. Throws NonFiniteInput for NaN/Inf.
  static Angle from_radians(double radians);

  double radians() const { return value_; }

  friend bool operator==(Angle a, Angle b) { return a.value_ == b.value_; }

 private:
  double value_ = 0.0;
};

/// wrap_angle(a) is congruent to a modulo 2*pi and lies in (-pi, pi].
Angle wrap_angle(double radians);

/// Geometric decomposition of the vehicle position relative to the directed
/// segment w_i -> w_next. e and r_along come from vector projection; the
/// angular fields are kept for cross-checks (|e| == r_u * |sin(beta)|).
struct CrossTrackGeometry {
  double r_u = 0.0;     // distance from w_i to the vehicle, m
  Angle theta;          // line-of-sight angle of the segment
  Angle theta_u;        // bearing from w_i to the vehicle
  Angle beta;           // wrap(theta - theta_u)
  double r_along = 0.0; // signed along-track distance from w_i, m
  double e = 0.0;       // signed cross-track error, m; positive left of the LOS
};

// Full-quadrant angle of w_next - w_i. Throws DegenerateSegment if the
// waypoints coincide within kCoincidenceTolerance.
Angle los_angle(Point2 w_i, Point2 w_next);

CrossTrackGeometry cross_track(Point2 p, Point2 w_i, Point2 w_next);

// Virtual target point: w_i + (r_along + delta) * (cos theta, sin theta).
// Always lies on the infinite LOS line. Requires delta > 0.
Point2 virtual_target(Point2 w_i, Angle theta, double r_along, double delta);

// Full-quadrant angle of s - p. Throws DegenerateTarget if p and s coincide.
Angle desired_heading(Point2 p, Point2 s);

// One-argument-arctangent formulation: every angle is |atan(dy/dx)|, so
// quadrant and sign information is lost and e, r_along are always >= 0.
// This is the geometry the absolute control form replicates; see
// ControlForm::Absolute in simulator.hpp.
struct AbsoluteTrack {
  double r_u = 0.0;
  double theta = 0.0;    // |atan| of the segment slope
  double theta_u = 0.0;  // |atan| of the bearing slope to the vehicle
  double beta = 0.0;     // |theta - theta_u|
  double r_along = 0.0;  // r_u * cos(beta)
  double e = 0.0;        // r_u * sin(beta)
};

AbsoluteTrack absolute_cross_track(Point2 p, Point2 w_i, Point2 w_next);

// |atan(dy/dx)| in [0, pi/2]. Returns NaN when from == to exactly; callers
// in the simulation loop treat a NaN as divergence, matching how the
// replicated formulation poisons its state.
double absolute_heading(Point2 from, Point2 to);

}  // namespace carrot
