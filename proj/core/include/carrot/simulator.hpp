#pragma once

#include <optional>
#include <span>
#include <vector>

#include "carrot/guidance.hpp"
#include "carrot/vehicle.hpp"

namespace carrot {

enum class Integrator {
  Kinematic,  // first-order heading dynamics, explicit Euler
  Reference,  // heading snap + v_y perturbation, replicates the reference loop
};

// Selects how angles and the cross-track error are computed in the loop.
enum class ControlForm {
  Signed,    // two-argument arctangent, wrapped heading error, signed e
  Absolute,  // one-argument |atan| geometry, raw heading difference, e >= 0
};

enum class StopReason {
  Converged,  // |e| <= e_stop
  Completed,  // final waypoint passed (missions only)
  MaxSteps,
  Diverged,
};

struct SimConfig {
  GuidanceParams guidance;
  double v_a = 25.0;
  double dt = 0.05;               // s
  Integrator integrator = Integrator::Kinematic;
  ControlForm form = ControlForm::Signed;
  double e_stop = 0.2;            // segment convergence threshold, m
  double capture_radius = 10.0;   // segment handoff radius, m (2 * delta)
  long max_steps = 20000;
  VehicleState initial_state{{10.0, 28.0}, Angle::from_radians(0.9), 25.0, 0.0};

  // Throws InvariantViolation on any violated bound, including
  // initial_state.v_a != v_a.
  void validate() const;
};

struct TrajectorySample {
  double t = 0.0;
  Point2 position;
  Angle psi;
  Angle psi_d;
  double e = 0.0;  // cross-track error as computed by the active form, m
  double u = 0.0;  // saturated command, m/s^2
  int segment_index = 0;
};

struct Metrics {
  std::optional<long> steps_to_converge;  // absent when never converged or diverged
  double max_abs_e = 0.0;       // m
  double final_abs_e = 0.0;     // m
  double integral_abs_e = 0.0;  // m*s, trapezoidal
  bool diverged = false;
  int segments_completed = 0;
};

struct SegmentResult {
  std::vector<TrajectorySample> trajectory;
  VehicleState final_state;
  Metrics metrics;
  StopReason stop_reason = StopReason::Converged;
};

struct MissionResult {
  std::vector<TrajectorySample> trajectory;
  VehicleState final_state;
  Metrics metrics;                       // aggregate over the whole trajectory
  std::vector<Metrics> segment_metrics;  // one entry per visited segment
  StopReason stop_reason = StopReason::Converged;
};

// Closed loop over a single segment, starting from `state`. Terminates at
// |e| <= e_stop, on divergence, or at max_steps; there is no waypoint
// handoff. Throws DegenerateSegment and InvariantViolation.
SegmentResult run_segment(const SimConfig& config, const VehicleState& state,
                          Point2 w_i, Point2 w_next);

// Closed loop over a waypoint list, starting from config.initial_state.
// With exactly two waypoints this is run_segment. With more, segment i
// hands off to i+1 once the along-track distance overruns the segment or
// the vehicle is within capture_radius of w_{i+1}; the final segment also
// terminates at |e| <= e_stop. Convergence alone never advances a segment.
MissionResult run_mission(const SimConfig& config, std::span<const Point2> waypoints);

// Derives metrics from a recorded trajectory. steps_to_converge is the first
// sample index from which |e| stays <= e_stop to the end of that sample's
// segment. Divergence is re-detected per segment: |e| exceeding
// 10 * max(|e_at_segment_start|, 1 m) while larger than |e| 100 samples
// earlier (window confined to the segment). Throws EmptyTrajectory.
Metrics compute_metrics(std::span<const TrajectorySample> trajectory, double e_stop);

}  // namespace carrot
