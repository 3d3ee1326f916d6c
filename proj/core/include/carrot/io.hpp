#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "carrot/simulator.hpp"
#include "carrot/sweep.hpp"

namespace carrot {

// Everything a run produced plus what is needed to reproduce it bit for bit.
struct RunRecord {
  SimConfig config;
  std::vector<Point2> waypoints;
  std::vector<TrajectorySample> trajectory;
  Metrics metrics;
  StopReason stop_reason = StopReason::Converged;
  std::string version;
};

// Shortest-of-9-significant-digits text form by default; 17 digits with
// full_precision round-trips doubles exactly.
std::string format_double(double value, bool full_precision = false);

// Waypoint CSV: rows of "x,y" with an optional "x,y" header, whitespace
// tolerant, '.' as the decimal separator. Throws ParseError (with line
// number), TooFewWaypoints, DuplicateConsecutiveWaypoint.
std::vector<Point2> parse_waypoints(std::string_view text);
std::string serialize_waypoints(std::span<const Point2> waypoints,
                                bool full_precision = false);

// Run configuration as a JSON object; absent keys take the documented
// defaults, unknown keys are a hard error. Throws ParseError, UnknownKey,
// InvariantViolation.
SimConfig parse_config(std::string_view text);
std::string serialize_config(const SimConfig& config);

// Trajectory CSV with header "t,x,y,psi,psi_d,e,u,segment". Identical runs
// produce byte-identical output.
std::string write_trajectory(const RunRecord& record, bool full_precision = false);
std::vector<TrajectorySample> parse_trajectory(std::string_view text);

// Sweep spec as JSON: {"base": <config>, "waypoints": [[x,y],...],
// "k_values": [...], "delta_values": [...], "k2_values": [...],
// "slow_threshold": n} with the last two optional.
SweepSpec parse_sweep_spec(std::string_view text);

// Sweep table CSV, one row per cell in sweep order.
std::string write_sweep_csv(std::span<const SweepCell> cells,
                            bool full_precision = false);

// Writes via a temporary file in the same directory and renames it into
// place, so a failed write never leaves a partial output. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);  // throws IoError

const char* to_string(StopReason reason);
const char* to_string(Integrator integrator);
const char* to_string(ControlForm form);
const char* to_string(Law law);
const char* to_string(Saturation saturation);

}  // namespace carrot
