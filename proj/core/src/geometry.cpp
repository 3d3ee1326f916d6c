#include "carrot/geometry.hpp"

#include <cmath>
#include <numbers>

namespace carrot {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

double distance(Point2 a, Point2 b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  return std::sqrt(dx * dx + dy * dy);
}

Angle Angle::from_radians(double radians) { return wrap_angle(radians); }

Angle wrap_angle(double radians) {
  if (!std::isfinite(radians)) {
    throw NonFiniteInput("wrap_angle: input is not finite");
  }
  // remainder() returns a value in [-pi, pi]; fold the open end onto +pi.
  double r = std::remainder(radians, 2.0 * kPi);
  if (r <= -kPi) {
    r = kPi;
  }
  Angle a;
  a.value_ = r;
  return a;
}

Angle los_angle(Point2 w_i, Point2 w_next) {
  if (distance(w_i, w_next) <= kCoincidenceTolerance) {
    throw DegenerateSegment("los_angle: waypoints coincide");
  }
  return wrap_angle(std::atan2(w_next.y - w_i.y, w_next.x - w_i.x));
}

CrossTrackGeometry cross_track(Point2 p, Point2 w_i, Point2 w_next) {
  const double dx = w_next.x - w_i.x;
  const double dy = w_next.y - w_i.y;
  const double len = std::sqrt(dx * dx + dy * dy);
  if (len <= kCoincidenceTolerance) {
    throw DegenerateSegment("cross_track: waypoints coincide");
  }
  const double ux = dx / len;
  const double uy = dy / len;
  const double px = p.x - w_i.x;
  const double py = p.y - w_i.y;

  CrossTrackGeometry g;
  g.r_u = std::sqrt(px * px + py * py);
  g.theta = wrap_angle(std::atan2(dy, dx));
  g.theta_u = wrap_angle(std::atan2(py, px));
  g.beta = wrap_angle(g.theta.radians() - g.theta_u.radians());
  g.r_along = px * ux + py * uy;
  g.e = ux * py - uy * px;
  return g;
}

Point2 virtual_target(Point2 w_i, Angle theta, double r_along, double delta) {
  const double reach = r_along + delta;
  return Point2{w_i.x + reach * std::cos(theta.radians()),
                w_i.y + reach * std::sin(theta.radians())};
}

Angle desired_heading(Point2 p, Point2 s) {
  if (distance(p, s) <= kCoincidenceTolerance) {
    throw DegenerateTarget("desired_heading: vehicle coincides with target");
  }
  return wrap_angle(std::atan2(s.y - p.y, s.x - p.x));
}

AbsoluteTrack absolute_cross_track(Point2 p, Point2 w_i, Point2 w_next) {
  if (distance(w_i, w_next) <= kCoincidenceTolerance) {
    throw DegenerateSegment("absolute_cross_track: waypoints coincide");
  }
  AbsoluteTrack g;
  const double dyu = w_i.y - p.y;
  const double dxu = w_i.x - p.x;
  g.r_u = std::sqrt(dyu * dyu + dxu * dxu);
  g.theta = std::fabs(std::atan((w_next.y - w_i.y) / (w_next.x - w_i.x)));
  g.theta_u = std::fabs(std::atan((p.y - w_i.y) / (p.x - w_i.x)));
  g.beta = std::fabs(g.theta - g.theta_u);
  g.r_along = g.r_u * std::cos(g.beta);
  g.e = g.r_u * std::sin(g.beta);
  return g;
}

double absolute_heading(Point2 from, Point2 to) {
  return std::fabs(std::atan((to.y - from.y) / (to.x - from.x)));
}

}  // namespace carrot
