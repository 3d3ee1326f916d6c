#pragma once

#include <span>
#include <string>

#include "carrot/io.hpp"
#include "carrot/sweep.hpp"

namespace carrot {

// Static SVG of a run: waypoint polyline with diamond markers, the vehicle
// trajectory with one point marker per sample, virtual-target markers, equal
// x/y scale, and a caption with the parameter values. Marker cardinalities
// are stable: one "wp" per waypoint and one "traj-pt" per sample (samples
// are thinned only beyond 2000 points). Throws EmptyData.
std::string emit_plot(const RunRecord& record);

// Static SVG of a sweep: one grid rectangle per cell, colored by label,
// axes over k and (delta, k2). Throws EmptyData.
std::string emit_sweep_plot(std::span<const SweepCell> cells);

}  // namespace carrot
