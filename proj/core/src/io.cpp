#include "carrot/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <initializer_list>

#include <nlohmann/json.hpp>

#include "carrot/version.hpp"

namespace carrot {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_number(std::string_view field, int line) {
  const std::string_view t = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw ParseError("invalid number '" + std::string(field) + "'", line);
  }
  if (!std::isfinite(value)) {
    throw ParseError("non-finite number '" + std::string(field) + "'", line);
  }
  return value;
}

long parse_integer(std::string_view field, int line) {
  const std::string_view t = trim(field);
  long value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw ParseError("invalid integer '" + std::string(field) + "'", line);
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

// ---- JSON helpers -------------------------------------------------------

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& scope) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw UnknownKey(scope + ": unknown key '" + key + "'");
    }
  }
}

double get_number(const json& obj, const char* key, double fallback,
                  const std::string& scope) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw ParseError(scope + ": '" + key + "' must be a number");
  }
  return v.get<double>();
}

long get_integer(const json& obj, const char* key, long fallback,
                 const std::string& scope) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ParseError(scope + ": '" + key + "' must be an integer");
  }
  return v.get<long>();
}

std::string get_string(const json& obj, const char* key, std::string fallback,
                       const std::string& scope) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) {
    throw ParseError(scope + ": '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

template <typename Enum>
Enum parse_enum(const std::string& text,
                std::initializer_list<std::pair<std::string_view, Enum>> table,
                const std::string& scope, const char* key) {
  for (const auto& [name, value] : table) {
    if (name == text) return value;
  }
  throw ParseError(scope + ": invalid value '" + text + "' for '" + key + "'");
}

json parse_json_document(std::string_view text, const std::string& scope) {
  if (trim(text).empty()) return json::object();
  try {
    return json::parse(text);
  } catch (const json::parse_error& ex) {
    throw ParseError(scope + ": " + ex.what());
  }
}

SimConfig config_from_json(const json& j, const std::string& scope) {
  if (!j.is_object()) {
    throw ParseError(scope + ": document must be a JSON object");
  }
  check_keys(j,
             {"v_a", "dt", "integrator", "form", "e_stop", "capture_radius",
              "max_steps", "initial", "guidance"},
             scope);

  SimConfig cfg;
  cfg.v_a = get_number(j, "v_a", 25.0, scope);
  cfg.dt = get_number(j, "dt", 0.05, scope);
  cfg.e_stop = get_number(j, "e_stop", 0.2, scope);
  cfg.max_steps = get_integer(j, "max_steps", 20000, scope);
  cfg.integrator = parse_enum<Integrator>(
      get_string(j, "integrator", "kinematic", scope),
      {{"kinematic", Integrator::Kinematic}, {"reference", Integrator::Reference}},
      scope, "integrator");
  cfg.form = parse_enum<ControlForm>(
      get_string(j, "form", "signed", scope),
      {{"signed", ControlForm::Signed}, {"absolute", ControlForm::Absolute}},
      scope, "form");

  if (j.contains("guidance")) {
    const json& g = j.at("guidance");
    if (!g.is_object()) throw ParseError(scope + ": 'guidance' must be an object");
    check_keys(g, {"law", "k", "k1", "k2", "delta", "u_max", "saturation"},
               scope + ".guidance");
    cfg.guidance.k = get_number(g, "k", 0.5, scope);
    cfg.guidance.k1 = get_number(g, "k1", 0.5, scope);
    cfg.guidance.k2 = get_number(g, "k2", 35.0, scope);
    cfg.guidance.delta = get_number(g, "delta", 5.0, scope);
    cfg.guidance.u_max = get_number(g, "u_max", 1.0, scope);
    cfg.guidance.law = parse_enum<Law>(get_string(g, "law", "p", scope),
                                       {{"p", Law::P}, {"p_cte", Law::PCte}},
                                       scope, "law");
    cfg.guidance.saturation = parse_enum<Saturation>(
        get_string(g, "saturation", "symmetric", scope),
        {{"symmetric", Saturation::Symmetric}, {"upper_only", Saturation::UpperOnly}},
        scope, "saturation");
  }

  // Unless set explicitly, the capture radius follows the lookahead.
  cfg.capture_radius =
      get_number(j, "capture_radius", 2.0 * cfg.guidance.delta, scope);

  double x0 = 10.0;
  double y0 = 28.0;
  double psi0 = 0.9;
  if (j.contains("initial")) {
    const json& init = j.at("initial");
    if (!init.is_object()) throw ParseError(scope + ": 'initial' must be an object");
    check_keys(init, {"x", "y", "psi"}, scope + ".initial");
    x0 = get_number(init, "x", x0, scope);
    y0 = get_number(init, "y", y0, scope);
    psi0 = get_number(init, "psi", psi0, scope);
  }
  cfg.initial_state =
      VehicleState{Point2{x0, y0}, Angle::from_radians(psi0), cfg.v_a, 0.0};

  cfg.validate();
  return cfg;
}

std::vector<Point2> waypoints_from_json(const json& arr, const std::string& scope) {
  if (!arr.is_array()) {
    throw ParseError(scope + ": 'waypoints' must be an array of [x, y] pairs");
  }
  std::vector<Point2> pts;
  for (const json& item : arr) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() ||
        !item[1].is_number()) {
      throw ParseError(scope + ": waypoint entries must be [x, y] number pairs");
    }
    pts.push_back(Point2{item[0].get<double>(), item[1].get<double>()});
  }
  if (pts.size() < 2) {
    throw TooFewWaypoints(scope + ": need at least 2 waypoints");
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (distance(pts[i], pts[i + 1]) <= kCoincidenceTolerance) {
      throw DuplicateConsecutiveWaypoint(scope + ": waypoints " + std::to_string(i) +
                                         " and " + std::to_string(i + 1) +
                                         " coincide");
    }
  }
  return pts;
}

std::vector<double> number_list(const json& obj, const char* key,
                                const std::string& scope) {
  const json& v = obj.at(key);
  if (!v.is_array() || v.empty()) {
    throw ParseError(scope + ": '" + std::string(key) + "' must be a nonempty array");
  }
  std::vector<double> out;
  for (const json& item : v) {
    if (!item.is_number()) {
      throw ParseError(scope + ": '" + std::string(key) + "' must contain numbers");
    }
    out.push_back(item.get<double>());
  }
  return out;
}

}  // namespace

std::string format_double(double value, bool full_precision) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*g", full_precision ? 17 : 9, value);
  return buf;
}

std::vector<Point2> parse_waypoints(std::string_view text) {
  std::vector<Point2> pts;
  std::vector<int> lines;
  int line_no = 0;
  bool allow_header = true;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;

    const auto fields = split(line, ',');
    if (allow_header && fields.size() == 2 && iequals(trim(fields[0]), "x") &&
        iequals(trim(fields[1]), "y")) {
      allow_header = false;
      continue;
    }
    allow_header = false;
    if (fields.size() != 2) {
      throw ParseError("expected 'x,y'", line_no);
    }
    pts.push_back(Point2{parse_number(fields[0], line_no),
                         parse_number(fields[1], line_no)});
    lines.push_back(line_no);
  }
  if (pts.size() < 2) {
    throw TooFewWaypoints("waypoint file needs at least 2 points");
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (distance(pts[i], pts[i + 1]) <= kCoincidenceTolerance) {
      throw DuplicateConsecutiveWaypoint("consecutive waypoints coincide",
                                         lines[i + 1]);
    }
  }
  return pts;
}

std::string serialize_waypoints(std::span<const Point2> waypoints,
                                bool full_precision) {
  std::string out = "x,y\n";
  for (const Point2& p : waypoints) {
    out += format_double(p.x, full_precision);
    out += ',';
    out += format_double(p.y, full_precision);
    out += '\n';
  }
  return out;
}

SimConfig parse_config(std::string_view text) {
  return config_from_json(parse_json_document(text, "config"), "config");
}

std::string serialize_config(const SimConfig& config) {
  json j;
  j["v_a"] = config.v_a;
  j["dt"] = config.dt;
  j["integrator"] = to_string(config.integrator);
  j["form"] = to_string(config.form);
  j["e_stop"] = config.e_stop;
  j["capture_radius"] = config.capture_radius;
  j["max_steps"] = config.max_steps;
  j["initial"] = {{"x", config.initial_state.position.x},
                  {"y", config.initial_state.position.y},
                  {"psi", config.initial_state.psi.radians()}};
  j["guidance"] = {{"law", to_string(config.guidance.law)},
                   {"k", config.guidance.k},
                   {"k1", config.guidance.k1},
                   {"k2", config.guidance.k2},
                   {"delta", config.guidance.delta},
                   {"u_max", config.guidance.u_max},
                   {"saturation", to_string(config.guidance.saturation)}};
  return j.dump(2) + "\n";
}

std::string write_trajectory(const RunRecord& record, bool full_precision) {
  std::string out = "t,x,y,psi,psi_d,e,u,segment\n";
  for (const TrajectorySample& s : record.trajectory) {
    out += format_double(s.t, full_precision);
    out += ',';
    out += format_double(s.position.x, full_precision);
    out += ',';
    out += format_double(s.position.y, full_precision);
    out += ',';
    out += format_double(s.psi.radians(), full_precision);
    out += ',';
    out += format_double(s.psi_d.radians(), full_precision);
    out += ',';
    out += format_double(s.e, full_precision);
    out += ',';
    out += format_double(s.u, full_precision);
    out += ',';
    out += std::to_string(s.segment_index);
    out += '\n';
  }
  return out;
}

std::vector<TrajectorySample> parse_trajectory(std::string_view text) {
  const auto lines = split(text, '\n');
  std::size_t i = 0;
  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i == lines.size() || trim(lines[i]) != "t,x,y,psi,psi_d,e,u,segment") {
    throw ParseError("trajectory: missing header 't,x,y,psi,psi_d,e,u,segment'",
                     static_cast<int>(i + 1));
  }
  std::vector<TrajectorySample> samples;
  for (++i; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i + 1);
    std::string_view raw = lines[i];
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 8) {
      throw ParseError("trajectory: expected 8 fields", line_no);
    }
    TrajectorySample s;
    s.t = parse_number(fields[0], line_no);
    s.position.x = parse_number(fields[1], line_no);
    s.position.y = parse_number(fields[2], line_no);
    s.psi = Angle::from_radians(parse_number(fields[3], line_no));
    s.psi_d = Angle::from_radians(parse_number(fields[4], line_no));
    s.e = parse_number(fields[5], line_no);
    s.u = parse_number(fields[6], line_no);
    s.segment_index = static_cast<int>(parse_integer(fields[7], line_no));
    samples.push_back(s);
  }
  return samples;
}

SweepSpec parse_sweep_spec(std::string_view text) {
  const json j = parse_json_document(text, "sweep spec");
  if (!j.is_object()) {
    throw ParseError("sweep spec: document must be a JSON object");
  }
  check_keys(j,
             {"base", "waypoints", "k_values", "delta_values", "k2_values",
              "slow_threshold"},
             "sweep spec");
  if (!j.contains("waypoints") || !j.contains("k_values") ||
      !j.contains("delta_values")) {
    throw ParseError("sweep spec: 'waypoints', 'k_values' and 'delta_values' are required");
  }

  SweepSpec spec;
  spec.base = config_from_json(j.contains("base") ? j.at("base") : json::object(),
                               "sweep spec.base");
  spec.waypoints = waypoints_from_json(j.at("waypoints"), "sweep spec");
  spec.k_values = number_list(j, "k_values", "sweep spec");
  spec.delta_values = number_list(j, "delta_values", "sweep spec");
  if (j.contains("k2_values")) {
    spec.k2_values = number_list(j, "k2_values", "sweep spec");
  }
  if (j.contains("slow_threshold")) {
    spec.slow_threshold = get_integer(j, "slow_threshold", 0, "sweep spec");
  }
  spec.validate();
  return spec;
}

std::string write_sweep_csv(std::span<const SweepCell> cells, bool full_precision) {
  std::string out =
      "k,delta,k2,label,steps_to_converge,max_abs_e,final_abs_e,integral_abs_e,"
      "diverged,error\n";
  for (const SweepCell& c : cells) {
    out += format_double(c.k, full_precision);
    out += ',';
    out += format_double(c.delta, full_precision);
    out += ',';
    out += format_double(c.k2, full_precision);
    out += ',';
    out += to_string(c.label);
    out += ',';
    if (c.metrics.steps_to_converge) {
      out += std::to_string(*c.metrics.steps_to_converge);
    }
    out += ',';
    out += format_double(c.metrics.max_abs_e, full_precision);
    out += ',';
    out += format_double(c.metrics.final_abs_e, full_precision);
    out += ',';
    out += format_double(c.metrics.integral_abs_e, full_precision);
    out += ',';
    out += c.metrics.diverged ? '1' : '0';
    out += ',';
    std::string msg = c.error;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    out += msg;
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open '" + tmp.string() + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ec2;
    fs::remove(tmp, ec2);
    throw IoError("failed renaming '" + tmp.string() + "' to '" + path.string() +
                  "': " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("failed reading '" + path.string() + "'");
  }
  return content;
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Converged: return "converged";
    case StopReason::Completed: return "completed";
    case StopReason::MaxSteps: return "max_steps";
    case StopReason::Diverged: return "diverged";
  }
  return "unknown";
}

const char* to_string(Integrator integrator) {
  return integrator == Integrator::Kinematic ? "kinematic" : "reference";
}

const char* to_string(ControlForm form) {
  return form == ControlForm::Signed ? "signed" : "absolute";
}

const char* to_string(Law law) { return law == Law::P ? "p" : "p_cte"; }

const char* to_string(Saturation saturation) {
  return saturation == Saturation::Symmetric ? "symmetric" : "upper_only";
}

}  // namespace carrot
