#include "carrot/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <set>
#include <vector>

namespace carrot {

namespace {

constexpr double kPlotWidth = 720.0;   // px, data area excluded margins
constexpr double kMargin = 48.0;       // px
constexpr double kCaptionSpace = 44.0; // px
constexpr std::size_t kMaxMarkers = 2000;

struct Bounds {
  double min_x = 0.0, max_x = 1.0, min_y = 0.0, max_y = 1.0;

  void include(Point2 p) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
};

void appendf(std::string& out, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  out += buf;
}

std::string fmt_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Maps data coordinates to pixel coordinates, y axis flipped.
struct Mapper {
  double scale = 1.0;
  double min_x = 0.0, max_y = 0.0;

  double px(double x) const { return kMargin + (x - min_x) * scale; }
  double py(double y) const { return kMargin + (max_y - y) * scale; }
};

void append_axes(std::string& out, const Bounds& b, const Mapper& m,
                 double plot_h) {
  appendf(out,
          "<rect class=\"frame\" x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" "
          "height=\"%.1f\" fill=\"none\" stroke=\"#444\"/>\n",
          kMargin, kMargin, kPlotWidth, plot_h);
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = b.min_x + (b.max_x - b.min_x) * i / ticks;
    const double fy = b.min_y + (b.max_y - b.min_y) * i / ticks;
    appendf(out,
            "<text class=\"tick\" x=\"%.1f\" y=\"%.1f\" font-size=\"10\" "
            "text-anchor=\"middle\" fill=\"#333\">%s</text>\n",
            m.px(fx), kMargin + plot_h + 14.0, fmt_value(fx).c_str());
    appendf(out,
            "<text class=\"tick\" x=\"%.1f\" y=\"%.1f\" font-size=\"10\" "
            "text-anchor=\"end\" fill=\"#333\">%s</text>\n",
            kMargin - 6.0, m.py(fy) + 3.0, fmt_value(fy).c_str());
  }
}

void append_diamond(std::string& out, const char* cls, double cx, double cy,
                    double r, const char* color) {
  appendf(out,
          "<path class=\"%s\" d=\"M %.2f %.2f L %.2f %.2f L %.2f %.2f L %.2f "
          "%.2f Z\" fill=\"%s\"/>\n",
          cls, cx, cy - r, cx + r, cy, cx, cy + r, cx - r, cy, color);
}

void append_triangle(std::string& out, const char* cls, double cx, double cy,
                     double r, const char* color) {
  appendf(out,
          "<path class=\"%s\" d=\"M %.2f %.2f L %.2f %.2f L %.2f %.2f Z\" "
          "fill=\"none\" stroke=\"%s\"/>\n",
          cls, cx, cy - r, cx + r, cy + r, cx - r, cy + r, color);
}

void append_polyline(std::string& out, const char* cls,
                     const std::vector<std::pair<double, double>>& pts,
                     const char* color, const char* dash) {
  out += "<polyline class=\"";
  out += cls;
  out += "\" points=\"";
  for (const auto& [x, y] : pts) {
    appendf(out, "%.2f,%.2f ", x, y);
  }
  appendf(out, "\" fill=\"none\" stroke=\"%s\"%s/>\n", color, dash);
}

}  // namespace

std::string emit_plot(const RunRecord& record) {
  if (record.trajectory.empty() || record.waypoints.size() < 2) {
    throw EmptyData("emit_plot: record has no trajectory or waypoints");
  }

  Bounds b;
  b.min_x = b.max_x = record.waypoints.front().x;
  b.min_y = b.max_y = record.waypoints.front().y;
  for (const Point2& w : record.waypoints) b.include(w);
  for (const TrajectorySample& s : record.trajectory) b.include(s.position);
  const double pad = 0.06 * std::max({b.max_x - b.min_x, b.max_y - b.min_y, 1.0});
  b.min_x -= pad;
  b.max_x += pad;
  b.min_y -= pad;
  b.max_y += pad;

  Mapper m;
  m.scale = kPlotWidth / (b.max_x - b.min_x);
  m.min_x = b.min_x;
  m.max_y = b.max_y;
  const double plot_h = (b.max_y - b.min_y) * m.scale;
  const double width = kPlotWidth + 2.0 * kMargin;
  const double height = plot_h + 2.0 * kMargin + kCaptionSpace;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  appendf(svg,
          "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
          "width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
          width, height, width, height);
  appendf(svg, "<rect x=\"0\" y=\"0\" width=\"%.0f\" height=\"%.0f\" fill=\"#ffffff\"/>\n",
          width, height);
  append_axes(svg, b, m, plot_h);

  // Waypoint path.
  std::vector<std::pair<double, double>> wp_px;
  for (const Point2& w : record.waypoints) {
    wp_px.emplace_back(m.px(w.x), m.py(w.y));
  }
  append_polyline(svg, "path-line", wp_px, "#888888", " stroke-dasharray=\"6 4\"");
  for (const Point2& w : record.waypoints) {
    append_diamond(svg, "wp", m.px(w.x), m.py(w.y), 5.0, "#222222");
  }

  // Trajectory.
  std::vector<std::pair<double, double>> traj_px;
  for (const TrajectorySample& s : record.trajectory) {
    traj_px.emplace_back(m.px(s.position.x), m.py(s.position.y));
  }
  append_polyline(svg, "traj-line", traj_px, "#1f5fa8", "");
  const std::size_t stride =
      record.trajectory.size() > kMaxMarkers
          ? (record.trajectory.size() + kMaxMarkers - 1) / kMaxMarkers
          : 1;
  for (std::size_t i = 0; i < record.trajectory.size(); i += stride) {
    const TrajectorySample& s = record.trajectory[i];
    appendf(svg,
            "<circle class=\"traj-pt\" cx=\"%.2f\" cy=\"%.2f\" r=\"1.6\" "
            "fill=\"#1f5fa8\"/>\n",
            m.px(s.position.x), m.py(s.position.y));
  }

  // Virtual target points, recomputed from the recorded poses.
  for (std::size_t i = 0; i < record.trajectory.size(); i += stride) {
    const TrajectorySample& s = record.trajectory[i];
    const std::size_t seg = static_cast<std::size_t>(s.segment_index);
    if (seg + 1 >= record.waypoints.size()) continue;
    const Point2 w_i = record.waypoints[seg];
    const Point2 w_next = record.waypoints[seg + 1];
    Point2 vtp;
    if (record.config.form == ControlForm::Signed) {
      const CrossTrackGeometry g = cross_track(s.position, w_i, w_next);
      vtp = virtual_target(w_i, g.theta, g.r_along, record.config.guidance.delta);
    } else {
      const AbsoluteTrack g = absolute_cross_track(s.position, w_i, w_next);
      vtp = virtual_target(w_i, Angle::from_radians(g.theta), g.r_along,
                           record.config.guidance.delta);
    }
    if (!std::isfinite(vtp.x) || !std::isfinite(vtp.y)) continue;
    append_triangle(svg, "vtp", m.px(vtp.x), m.py(vtp.y), 3.0, "#2aa198");
  }

  // Caption.
  const GuidanceParams& g = record.config.guidance;
  std::string line1 = "law=" + std::string(to_string(g.law));
  if (g.law == Law::P) {
    line1 += " k=" + fmt_value(g.k);
  } else {
    line1 += " k1=" + fmt_value(g.k1) + " k2=" + fmt_value(g.k2);
  }
  line1 += " delta=" + fmt_value(g.delta) + " u_max=" + fmt_value(g.u_max) +
           " sat=" + to_string(g.saturation);
  std::string line2 = std::string("integrator=") + to_string(record.config.integrator) +
                      " form=" + to_string(record.config.form) +
                      " v_a=" + fmt_value(record.config.v_a) +
                      " dt=" + fmt_value(record.config.dt) +
                      " samples=" + std::to_string(record.trajectory.size()) +
                      " stop=" + to_string(record.stop_reason);
  if (record.metrics.steps_to_converge) {
    line2 += " steps_to_converge=" + std::to_string(*record.metrics.steps_to_converge);
  }
  appendf(svg,
          "<text class=\"caption\" x=\"%.1f\" y=\"%.1f\" font-size=\"12\" "
          "fill=\"#111\">%s</text>\n",
          kMargin, plot_h + 2.0 * kMargin + 2.0, line1.c_str());
  appendf(svg,
          "<text class=\"caption\" x=\"%.1f\" y=\"%.1f\" font-size=\"12\" "
          "fill=\"#111\">%s</text>\n",
          kMargin, plot_h + 2.0 * kMargin + 18.0, line2.c_str());

  svg += "</svg>\n";
  return svg;
}

std::string emit_sweep_plot(std::span<const SweepCell> cells) {
  if (cells.empty()) {
    throw EmptyData("emit_sweep_plot: no cells");
  }

  std::set<double> ks;
  std::set<std::pair<double, double>> rows;  // (delta, k2)
  for (const SweepCell& c : cells) {
    ks.insert(c.k);
    rows.insert({c.delta, c.k2});
  }
  std::map<double, int> k_index;
  int idx = 0;
  for (double k : ks) k_index[k] = idx++;
  std::map<std::pair<double, double>, int> row_index;
  idx = 0;
  for (const auto& r : rows) row_index[r] = idx++;

  const bool multi_k2 = [&] {
    std::set<double> k2s;
    for (const SweepCell& c : cells) k2s.insert(c.k2);
    return k2s.size() > 1;
  }();

  const double cell_w = std::min(40.0, std::max(10.0, 640.0 / ks.size()));
  const double cell_h = std::min(40.0, std::max(10.0, 420.0 / rows.size()));
  const double grid_w = cell_w * static_cast<double>(ks.size());
  const double grid_h = cell_h * static_cast<double>(rows.size());
  const double width = grid_w + 2.0 * kMargin + 120.0;  // room for the legend
  const double height = grid_h + 2.0 * kMargin + 20.0;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  appendf(svg,
          "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
          "width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
          width, height, width, height);
  appendf(svg, "<rect x=\"0\" y=\"0\" width=\"%.0f\" height=\"%.0f\" fill=\"#ffffff\"/>\n",
          width, height);

  auto label_color = [](CellLabel label) {
    switch (label) {
      case CellLabel::Converged: return "#3a7d44";
      case CellLabel::Slow: return "#d4a017";
      case CellLabel::Diverged: return "#b4322f";
      case CellLabel::Timeout: return "#d9772e";
      case CellLabel::Error: return "#777777";
    }
    return "#000000";
  };

  for (const SweepCell& c : cells) {
    const double x = kMargin + k_index[c.k] * cell_w;
    const double y = kMargin + row_index[{c.delta, c.k2}] * cell_h;
    appendf(svg,
            "<rect class=\"cell %s\" x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" "
            "height=\"%.1f\" fill=\"%s\" stroke=\"#ffffff\"/>\n",
            to_string(c.label), x, y, cell_w, cell_h, label_color(c.label));
  }

  // Axis labels.
  for (const auto& [k, i] : k_index) {
    appendf(svg,
            "<text class=\"tick\" x=\"%.1f\" y=\"%.1f\" font-size=\"9\" "
            "text-anchor=\"middle\" fill=\"#333\">%s</text>\n",
            kMargin + i * cell_w + cell_w / 2.0, kMargin + grid_h + 12.0,
            fmt_value(k).c_str());
  }
  for (const auto& [row, i] : row_index) {
    std::string label = fmt_value(row.first);
    if (multi_k2) label += "/" + fmt_value(row.second);
    appendf(svg,
            "<text class=\"tick\" x=\"%.1f\" y=\"%.1f\" font-size=\"9\" "
            "text-anchor=\"end\" fill=\"#333\">%s</text>\n",
            kMargin - 4.0, kMargin + i * cell_h + cell_h / 2.0 + 3.0,
            label.c_str());
  }
  appendf(svg,
          "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"middle\" "
          "fill=\"#111\">k</text>\n",
          kMargin + grid_w / 2.0, kMargin + grid_h + 26.0);
  appendf(svg,
          "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" fill=\"#111\">%s</text>\n",
          6.0, kMargin - 8.0, multi_k2 ? "delta/k2" : "delta");

  // Legend.
  const CellLabel all_labels[] = {CellLabel::Converged, CellLabel::Slow,
                                  CellLabel::Diverged, CellLabel::Timeout,
                                  CellLabel::Error};
  double ly = kMargin;
  for (CellLabel label : all_labels) {
    appendf(svg,
            "<rect x=\"%.1f\" y=\"%.1f\" width=\"12\" height=\"12\" fill=\"%s\"/>\n",
            kMargin + grid_w + 20.0, ly, label_color(label));
    appendf(svg,
            "<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\" fill=\"#333\">%s</text>\n",
            kMargin + grid_w + 36.0, ly + 10.0, to_string(label));
    ly += 18.0;
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace carrot
