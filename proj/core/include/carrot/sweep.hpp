#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "carrot/simulator.hpp"

namespace carrot {

struct SweepSpec {
  SimConfig base;                 // initial state and everything not swept
  std::vector<Point2> waypoints;  // scenario path
  std::vector<double> k_values;      // overrides guidance.k and guidance.k1
  std::vector<double> delta_values;  // overrides guidance.delta
  std::optional<std::vector<double>> k2_values;  // overrides guidance.k2 when present
  // Cells converging in more than this many steps are labeled SLOW. When
  // absent, 4x the step count of a baseline run at k = 0.5, delta = 5 under
  // the same base config; base.max_steps if the baseline does not converge.
  std::optional<long> slow_threshold;

  void validate() const;  // throws InvariantViolation
};

enum class CellLabel { Converged, Slow, Diverged, Timeout, Error };

struct SweepCell {
  double k = 0.0;
  double delta = 0.0;
  double k2 = 0.0;
  Metrics metrics;
  CellLabel label = CellLabel::Error;
  std::string error;  // nonempty only when label == Error
};

// One cell per grid point in lexicographic (k, delta, k2) order. Each cell
// simulates independently from base.initial_state; per-cell errors are
// captured as CellLabel::Error without aborting the sweep. Cells may be
// evaluated concurrently (CARROT_GUIDE_THREADS caps the thread count) but
// the output order and content are schedule-independent.
std::vector<SweepCell> run_sweep(const SweepSpec& spec);

// Deterministic mapping: Diverged from metrics.diverged, Timeout when
// steps_to_converge is absent, else Converged or Slow against the threshold.
CellLabel classify(const Metrics& metrics, long slow_threshold);

struct BoundaryPoint {
  double delta = 0.0;
  std::optional<double> k_critical;  // smallest k labeled Diverged, if any
};

// Per-delta stability boundary of a rectangular (k, delta) sweep at a single
// k2. Raw grid resolution only, no interpolation. Throws NonRectangularGrid.
std::vector<BoundaryPoint> stability_boundary(std::span<const SweepCell> cells);

const char* to_string(CellLabel label);

}  // namespace carrot
