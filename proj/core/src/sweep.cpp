#include "carrot/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <map>
#include <set>
#include <thread>

namespace carrot {

namespace {

// Set of positive, finite grid values.
void check_grid(const std::vector<double>& values, const char* name) {
  if (values.empty()) {
    throw InvariantViolation(std::string(name) + " must be nonempty");
  }
  for (double v : values) {
    if (!(v > 0.0)) {
      throw InvariantViolation(std::string(name) + " values must be > 0");
    }
  }
}

std::size_t sweep_thread_count(std::size_t cells) {
  std::size_t n = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("CARROT_GUIDE_THREADS")) {
    std::size_t parsed = 0;
    const char* end = env + std::string_view(env).size();
    if (std::from_chars(env, end, parsed).ec == std::errc{} && parsed > 0) {
      n = parsed;
    }
  }
  if (n == 0) n = 1;
  return std::min(n, cells);
}

SimConfig cell_config(const SimConfig& base, double k, double delta, double k2) {
  SimConfig cfg = base;
  cfg.guidance.k = k;
  cfg.guidance.k1 = k;
  cfg.guidance.delta = delta;
  cfg.guidance.k2 = k2;
  return cfg;
}

Metrics simulate_cell(const SimConfig& cfg, const std::vector<Point2>& wps) {
  if (wps.size() == 2) {
    return run_segment(cfg, cfg.initial_state, wps[0], wps[1]).metrics;
  }
  return run_mission(cfg, wps).metrics;
}

}  // namespace

void SweepSpec::validate() const {
  base.validate();
  check_grid(k_values, "k_values");
  check_grid(delta_values, "delta_values");
  if (k2_values) {
    if (k2_values->empty()) throw InvariantViolation("k2_values must be nonempty");
    for (double v : *k2_values) {
      if (!(v >= 0.0)) throw InvariantViolation("k2_values must be >= 0");
    }
  }
  if (waypoints.size() < 2) {
    throw InvariantViolation("sweep scenario needs at least 2 waypoints");
  }
}

CellLabel classify(const Metrics& metrics, long slow_threshold) {
  if (metrics.diverged) return CellLabel::Diverged;
  if (!metrics.steps_to_converge) return CellLabel::Timeout;
  return *metrics.steps_to_converge <= slow_threshold ? CellLabel::Converged
                                                      : CellLabel::Slow;
}

std::vector<SweepCell> run_sweep(const SweepSpec& spec) {
  spec.validate();

  long slow_threshold;
  if (spec.slow_threshold) {
    slow_threshold = *spec.slow_threshold;
  } else {
    slow_threshold = spec.base.max_steps;
    try {
      const Metrics baseline = simulate_cell(
          cell_config(spec.base, 0.5, 5.0, spec.base.guidance.k2), spec.waypoints);
      if (baseline.steps_to_converge) {
        slow_threshold = 4 * *baseline.steps_to_converge;
      }
    } catch (const Error&) {
      // Baseline failures leave the threshold at max_steps; the per-cell
      // runs will surface the same error as Error labels.
    }
  }

  const std::vector<double> k2s =
      spec.k2_values ? *spec.k2_values : std::vector<double>{spec.base.guidance.k2};

  std::vector<SweepCell> cells;
  for (double k : spec.k_values) {
    for (double delta : spec.delta_values) {
      for (double k2 : k2s) {
        SweepCell c;
        c.k = k;
        c.delta = delta;
        c.k2 = k2;
        cells.push_back(c);
      }
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      SweepCell& c = cells[i];
      try {
        c.metrics = simulate_cell(cell_config(spec.base, c.k, c.delta, c.k2),
                                  spec.waypoints);
        c.label = classify(c.metrics, slow_threshold);
      } catch (const std::exception& ex) {
        c.label = CellLabel::Error;
        c.error = ex.what();
      }
    }
  };

  const std::size_t n_threads = sweep_thread_count(cells.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return cells;
}

std::vector<BoundaryPoint> stability_boundary(std::span<const SweepCell> cells) {
  std::set<double> ks;
  std::set<double> deltas;
  std::set<double> k2s;
  std::map<std::pair<double, double>, const SweepCell*> by_point;
  for (const SweepCell& c : cells) {
    ks.insert(c.k);
    deltas.insert(c.delta);
    k2s.insert(c.k2);
    if (!by_point.emplace(std::make_pair(c.k, c.delta), &c).second) {
      throw NonRectangularGrid("stability_boundary: duplicate (k, delta) cell");
    }
  }
  if (cells.empty() || k2s.size() != 1 || by_point.size() != ks.size() * deltas.size()) {
    throw NonRectangularGrid("stability_boundary: cells do not form a (k, delta) grid");
  }

  std::vector<BoundaryPoint> boundary;
  for (double delta : deltas) {
    BoundaryPoint bp;
    bp.delta = delta;
    for (double k : ks) {
      if (by_point.at({k, delta})->label == CellLabel::Diverged) {
        bp.k_critical = k;
        break;
      }
    }
    boundary.push_back(bp);
  }
  return boundary;
}

const char* to_string(CellLabel label) {
  switch (label) {
    case CellLabel::Converged: return "converged";
    case CellLabel::Slow: return "slow";
    case CellLabel::Diverged: return "diverged";
    case CellLabel::Timeout: return "timeout";
    case CellLabel::Error: return "error";
  }
  return "unknown";
}

}  // namespace carrot
