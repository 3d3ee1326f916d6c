#include "carrot/simulator.hpp"

#include <cmath>
#include <limits>

namespace carrot {

namespace {

constexpr long kDivergenceWindow = 100;  // samples

// One guidance evaluation at the current pose against one segment.
struct StepEval {
  double e = 0.0;
  double r_along = 0.0;
  double seg_len = 0.0;
  double dist_to_next = 0.0;
  double psi_d = 0.0;  // rad, not yet wrapped into an Angle
  double u = 0.0;
  bool finite = true;
};

StepEval evaluate(const SimConfig& cfg, const VehicleState& state,
                  Point2 w_i, Point2 w_next) {
  StepEval ev;
  ev.seg_len = distance(w_i, w_next);
  ev.dist_to_next = distance(state.position, w_next);

  double heading_error = 0.0;
  if (cfg.form == ControlForm::Signed) {
    const CrossTrackGeometry g = cross_track(state.position, w_i, w_next);
    ev.e = g.e;
    ev.r_along = g.r_along;
    const Point2 s = virtual_target(w_i, g.theta, g.r_along, cfg.guidance.delta);
    ev.psi_d = desired_heading(state.position, s).radians();
    heading_error = wrap_angle(ev.psi_d - state.psi.radians()).radians();
  } else {
    const AbsoluteTrack g = absolute_cross_track(state.position, w_i, w_next);
    ev.e = g.e;
    ev.r_along = g.r_along;
    const Point2 s = virtual_target(w_i, Angle::from_radians(g.theta), g.r_along,
                                    cfg.guidance.delta);
    ev.psi_d = absolute_heading(state.position, s);
    heading_error = ev.psi_d - state.psi.radians();
  }

  if (!std::isfinite(ev.e) || !std::isfinite(ev.psi_d) || !std::isfinite(heading_error)) {
    ev.finite = false;
    return ev;
  }
  ev.u = apply_law(heading_error, ev.e, cfg.v_a, cfg.guidance).u;
  return ev;
}

bool segment_passed(const StepEval& ev, double capture_radius) {
  return ev.r_along >= ev.seg_len || ev.dist_to_next <= capture_radius;
}

// Online form of the detector documented at compute_metrics: threshold and
// window are confined to the current segment.
bool divergence_fired(const std::vector<TrajectorySample>& traj,
                      std::size_t seg_start, double e0_seg) {
  const std::size_t k = traj.size() - 1;
  if (k < seg_start + kDivergenceWindow) return false;
  const double threshold = 10.0 * std::max(e0_seg, 1.0);
  const double ek = std::abs(traj[k].e);
  return ek > threshold && ek > std::abs(traj[k - kDivergenceWindow].e);
}

struct LoopResult {
  std::vector<TrajectorySample> trajectory;
  VehicleState final_state;
  StopReason stop_reason = StopReason::Converged;
  int last_segment = 0;
};

LoopResult run_loop(const SimConfig& cfg, const VehicleState& start,
                    std::span<const Point2> wps, bool mission) {
  LoopResult res;
  VehicleState state = start;
  int seg = 0;
  const int last_seg = static_cast<int>(wps.size()) - 2;
  std::size_t seg_start_idx = 0;
  double e0_seg = std::numeric_limits<double>::quiet_NaN();
  long steps = 0;

  for (;;) {
    StepEval ev = evaluate(cfg, state, wps[seg], wps[seg + 1]);

    if (mission) {
      // Hand off as many segments as the current pose already passes.
      while (seg < last_seg && ev.finite && segment_passed(ev, cfg.capture_radius)) {
        ++seg;
        seg_start_idx = res.trajectory.size();
        e0_seg = std::numeric_limits<double>::quiet_NaN();
        ev = evaluate(cfg, state, wps[seg], wps[seg + 1]);
      }
    }

    if (!ev.finite) {
      res.stop_reason = StopReason::Diverged;
      break;
    }

    res.trajectory.push_back(TrajectorySample{state.t, state.position, state.psi,
                                              Angle::from_radians(ev.psi_d), ev.e,
                                              ev.u, seg});
    if (std::isnan(e0_seg)) e0_seg = std::abs(ev.e);

    if (mission && seg == last_seg && segment_passed(ev, cfg.capture_radius)) {
      res.stop_reason = StopReason::Completed;
      break;
    }
    if (std::abs(ev.e) <= cfg.e_stop && (!mission || seg == last_seg)) {
      res.stop_reason = StopReason::Converged;
      break;
    }
    if (divergence_fired(res.trajectory, seg_start_idx, e0_seg)) {
      res.stop_reason = StopReason::Diverged;
      break;
    }
    if (steps >= cfg.max_steps) {
      res.stop_reason = StopReason::MaxSteps;
      break;
    }

    if (cfg.integrator == Integrator::Kinematic) {
      state = step_kinematic(state, Angle::from_radians(ev.psi_d), cfg.guidance.k, cfg.dt);
    } else {
      state = step_reference(state, Angle::from_radians(ev.psi_d), ev.u, cfg.dt);
    }
    ++steps;
  }

  res.final_state = state;
  res.last_segment = seg;
  return res;
}

Metrics finish_metrics(const LoopResult& loop, const SimConfig& cfg, bool mission) {
  Metrics m;
  if (!loop.trajectory.empty()) {
    m = compute_metrics(loop.trajectory, cfg.e_stop);
  }
  if (loop.stop_reason == StopReason::Diverged) {
    m.diverged = true;
    m.steps_to_converge.reset();
  }
  const bool final_done = loop.stop_reason == StopReason::Converged ||
                          loop.stop_reason == StopReason::Completed;
  m.segments_completed = mission ? loop.last_segment + (final_done ? 1 : 0)
                                 : (final_done ? 1 : 0);
  return m;
}

}  // namespace

void SimConfig::validate() const {
  guidance.validate();
  if (!(v_a > 0.0)) throw InvariantViolation("v_a must be > 0");
  if (!(dt > 0.0)) throw InvariantViolation("dt must be > 0");
  if (!(e_stop > 0.0)) throw InvariantViolation("e_stop must be > 0");
  if (!(capture_radius > 0.0)) throw InvariantViolation("capture_radius must be > 0");
  if (max_steps < 1) throw InvariantViolation("max_steps must be >= 1");
  if (initial_state.v_a != v_a) {
    throw InvariantViolation("initial_state.v_a must equal v_a");
  }
  if (!std::isfinite(initial_state.position.x) || !std::isfinite(initial_state.position.y)) {
    throw InvariantViolation("initial position must be finite");
  }
}

SegmentResult run_segment(const SimConfig& config, const VehicleState& state,
                          Point2 w_i, Point2 w_next) {
  config.validate();
  los_angle(w_i, w_next);  // rejects degenerate segments up front

  const Point2 wps[2] = {w_i, w_next};
  LoopResult loop = run_loop(config, state, wps, /*mission=*/false);

  SegmentResult out;
  out.metrics = finish_metrics(loop, config, /*mission=*/false);
  out.trajectory = std::move(loop.trajectory);
  out.final_state = loop.final_state;
  out.stop_reason = loop.stop_reason;
  return out;
}

MissionResult run_mission(const SimConfig& config, std::span<const Point2> waypoints) {
  config.validate();
  if (waypoints.size() < 2) {
    throw ConfigError("run_mission: need at least 2 waypoints");
  }
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    los_angle(waypoints[i], waypoints[i + 1]);
  }

  const bool single = waypoints.size() == 2;
  LoopResult loop = run_loop(config, config.initial_state, waypoints, /*mission=*/!single);

  MissionResult out;
  out.metrics = finish_metrics(loop, config, /*mission=*/!single);
  out.stop_reason = loop.stop_reason;
  out.final_state = loop.final_state;

  // Per-segment metrics from the contiguous runs of segment_index.
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= loop.trajectory.size(); ++i) {
    if (i == loop.trajectory.size() ||
        loop.trajectory[i].segment_index != loop.trajectory[begin].segment_index) {
      out.segment_metrics.push_back(compute_metrics(
          std::span<const TrajectorySample>(loop.trajectory).subspan(begin, i - begin),
          config.e_stop));
      begin = i;
    }
  }
  out.trajectory = std::move(loop.trajectory);
  return out;
}

Metrics compute_metrics(std::span<const TrajectorySample> trajectory, double e_stop) {
  if (trajectory.empty()) {
    throw EmptyTrajectory("compute_metrics: empty trajectory");
  }

  Metrics m;
  m.final_abs_e = std::abs(trajectory.back().e);
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const double abs_e = std::abs(trajectory[i].e);
    if (!(abs_e <= m.max_abs_e)) m.max_abs_e = abs_e;  // NaN promotes too
    if (i > 0) {
      m.integral_abs_e += 0.5 * (std::abs(trajectory[i - 1].e) + abs_e) *
                          (trajectory[i].t - trajectory[i - 1].t);
    }
    if (!std::isfinite(trajectory[i].e)) m.diverged = true;
  }

  // Segment boundaries.
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    if (trajectory[i].segment_index != trajectory[i - 1].segment_index) {
      starts.push_back(i);
    }
  }
  starts.push_back(trajectory.size());

  for (std::size_t s = 0; s + 1 < starts.size(); ++s) {
    const std::size_t a = starts[s];
    const std::size_t b = starts[s + 1];

    // Earliest suffix of this segment staying within e_stop.
    std::size_t sustained = b;
    for (std::size_t i = b; i-- > a;) {
      if (std::abs(trajectory[i].e) <= e_stop) {
        sustained = i;
      } else {
        break;
      }
    }
    if (sustained < b && !m.steps_to_converge) {
      m.steps_to_converge = static_cast<long>(sustained);
    }

    const double e0 = std::abs(trajectory[a].e);
    const double threshold = 10.0 * std::max(e0, 1.0);
    for (std::size_t k = a + kDivergenceWindow; k < b; ++k) {
      const double ek = std::abs(trajectory[k].e);
      if (ek > threshold && ek > std::abs(trajectory[k - kDivergenceWindow].e)) {
        m.diverged = true;
        break;
      }
    }
  }

  if (m.diverged) m.steps_to_converge.reset();

  int transitions = static_cast<int>(starts.size()) - 2;
  m.segments_completed =
      transitions + (std::abs(trajectory.back().e) <= e_stop ? 1 : 0);
  return m;
}

}  // namespace carrot
