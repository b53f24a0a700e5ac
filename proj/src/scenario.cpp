#include "swim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "swim/ellipsoid.hpp"
#include "swim/errors.hpp"
#include "swim/fields.hpp"
#include "swim/rectify.hpp"

namespace swim {

namespace {

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

struct RawItem {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
  bool used = false;
};

std::string field_name(const RawItem& item) {
  return item.section.empty() ? item.key : item.section + "." + item.key;
}

std::vector<RawItem> parse_items(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);

  std::vector<RawItem> items;
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("scenario line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("scenario line " + std::to_string(lineno) + ": empty section name");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("scenario line " + std::to_string(lineno) + ": expected key = value");
    RawItem item;
    item.section = section;
    item.key = trim(line.substr(0, eq));
    item.value = trim(line.substr(eq + 1));
    item.line = lineno;
    if (item.key.empty())
      throw ConfigError("scenario line " + std::to_string(lineno) + ": empty key");
    items.push_back(std::move(item));
  }
  return items;
}

// Access layer over the raw items: every read marks its item used, and
// finish() rejects anything left over, so typos surface by name.
class Reader {
 public:
  explicit Reader(std::vector<RawItem> items) : items_(std::move(items)) {}

  std::vector<std::string> all(const std::string& section, const std::string& key) {
    std::vector<std::string> values;
    for (auto& item : items_)
      if (item.section == section && item.key == key) {
        item.used = true;
        values.push_back(item.value);
      }
    return values;
  }

  std::optional<std::string> one(const std::string& section, const std::string& key) {
    auto values = all(section, key);
    if (values.size() > 1)
      throw ConfigError((section.empty() ? key : section + "." + key) + ": duplicate key");
    if (values.empty()) return std::nullopt;
    return values.front();
  }

  std::string require(const std::string& section, const std::string& key) {
    auto value = one(section, key);
    if (!value)
      throw ConfigError((section.empty() ? key : section + "." + key) + ": missing required key");
    return *value;
  }

  bool section_present(const std::string& section) const {
    return std::any_of(items_.begin(), items_.end(),
                       [&](const RawItem& i) { return i.section == section; });
  }

  void finish() const {
    for (const auto& item : items_)
      if (!item.used)
        throw ConfigError("unknown or misplaced key '" + field_name(item) + "' (line " +
                          std::to_string(item.line) + ")");
  }

 private:
  std::vector<RawItem> items_;
};

double to_double(const std::string& text, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    if (!std::isfinite(v)) throw std::invalid_argument("not finite");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field + ": not a number: '" + text + "'");
  }
}

long long to_integer(const std::string& text, const std::string& field) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field + ": not an integer: '" + text + "'");
  }
}

std::uint64_t to_seed(const std::string& text, const std::string& field) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field + ": not an unsigned integer: '" + text + "'");
  }
}

std::vector<double> to_doubles(const std::string& text, const std::string& field) {
  std::istringstream in(text);
  std::vector<double> values;
  std::string token;
  while (in >> token) values.push_back(to_double(token, field));
  return values;
}

VecX to_vecx(const std::string& text, int expected, const std::string& field) {
  const auto values = to_doubles(text, field);
  if (static_cast<int>(values.size()) != expected)
    throw ConfigError(field + ": expected " + std::to_string(expected) + " values, got " +
                      std::to_string(values.size()));
  VecX out(expected);
  for (int i = 0; i < expected; ++i) out[i] = values[static_cast<std::size_t>(i)];
  return out;
}

void parse_shape(Reader& reader, Scenario& sc) {
  const auto kind = reader.one("shape", "kind");
  if (kind && *kind != "ellipsoid" && *kind != "ball")
    throw ConfigError("shape.kind: expected 'ellipsoid' or 'ball', got '" + *kind + "'");
  if (kind && *kind == "ball") {
    const double radius =
        reader.one("shape", "radius") ? to_double(*reader.one("shape", "radius"), "shape.radius")
                                      : 1.0;
    if (radius <= 0.0) throw ConfigError("shape.radius: must be positive");
    sc.axes = Vec3::Constant(radius);
    return;
  }
  if (const auto axes = reader.one("shape", "axes")) {
    const VecX v = to_vecx(*axes, 3, "shape.axes");
    if (v.minCoeff() <= 0.0) throw ConfigError("shape.axes: semi-axes must be positive");
    sc.axes = v.head<3>();
  }
}

void parse_density(Reader& reader, Scenario& sc) {
  const auto kind = reader.one("density", "kind");
  if (!kind || *kind == "constant") {
    sc.density_kind = Scenario::DensityKind::Constant;
    if (const auto value = reader.one("density", "value")) {
      sc.density_value = to_double(*value, "density.value");
      if (sc.density_value <= 0.0) throw ConfigError("density.value: must be positive");
    }
    return;
  }
  if (*kind == "inertia_targets") {
    sc.density_kind = Scenario::DensityKind::InertiaTargets;
    const VecX targets = to_vecx(reader.require("density", "targets"), 3, "density.targets");
    if (targets.minCoeff() <= 0.0) throw ConfigError("density.targets: must be positive");
    sc.inertia_targets = targets.head<3>();
    if (const auto offset = reader.one("density", "offset")) {
      sc.density_offset = to_double(*offset, "density.offset");
      if (sc.density_offset <= 0.0) throw ConfigError("density.offset: must be positive");
    }
    return;
  }
  throw ConfigError("density.kind: expected 'constant' or 'inertia_targets', got '" + *kind + "'");
}

void parse_movements(Reader& reader, Scenario& sc) {
  if (const auto kind = reader.one("movements", "kind"))
    if (*kind != "rigid_shell")
      throw ConfigError("movements.kind: only 'rigid_shell' is available, got '" + *kind + "'");
  if (const auto count = reader.one("movements", "count")) {
    const long long n = to_integer(*count, "movements.count");
    if (n < 1 || n > 6) throw ConfigError("movements.count: must be between 1 and 6");
    sc.movement_count = static_cast<int>(n);
  }
}

void parse_numerics(Reader& reader, Scenario& sc) {
  if (const auto v = reader.one("numerics", "refinement")) {
    const long long r = to_integer(*v, "numerics.refinement");
    if (r < 0 || r > 7) throw ConfigError("numerics.refinement: must be between 0 and 7");
    sc.refinement = static_cast<int>(r);
  }
  if (const auto v = reader.one("numerics", "quadrature")) {
    const long long q = to_integer(*v, "numerics.quadrature");
    if (q < 5 || q > 61) throw ConfigError("numerics.quadrature: must be between 5 and 61");
    sc.quadrature = static_cast<int>(q);
  }
  if (const auto v = reader.one("numerics", "step")) {
    sc.step = to_double(*v, "numerics.step");
    if (sc.step <= 0.0) throw ConfigError("numerics.step: must be positive");
  }
  if (const auto v = reader.one("numerics", "tolerance")) {
    sc.tolerance = to_double(*v, "numerics.tolerance");
    if (sc.tolerance <= 0.0) throw ConfigError("numerics.tolerance: must be positive");
  }
  if (const auto v = reader.one("numerics", "depth")) {
    const long long d = to_integer(*v, "numerics.depth");
    if (d < 1 || d > 3) throw ConfigError("numerics.depth: must be between 1 and 3");
    sc.depth = static_cast<int>(d);
  }
  if (const auto v = reader.one("numerics", "mu_source")) {
    if (*v == "oracle")
      sc.mu_source = Scenario::MuSource::Oracle;
    else if (*v == "bem")
      sc.mu_source = Scenario::MuSource::Bem;
    else
      throw ConfigError("numerics.mu_source: expected 'oracle' or 'bem', got '" + *v + "'");
  }
}

void parse_controls(Reader& reader, Scenario& sc) {
  if (!reader.section_present("controls")) return;
  const std::string kind = reader.require("controls", "kind");
  const int n = sc.movement_count;

  if (const auto v = reader.one("controls", "mollify")) {
    sc.mollify_width = to_double(*v, "controls.mollify");
    if (sc.mollify_width < 0.0) throw ConfigError("controls.mollify: must be nonnegative");
  }

  if (kind == "zero") {
    sc.control_kind = Scenario::ControlKind::Zero;
    sc.control_duration = to_double(reader.require("controls", "duration"), "controls.duration");
    if (sc.control_duration <= 0.0) throw ConfigError("controls.duration: must be positive");
    return;
  }
  if (kind == "piecewise") {
    sc.control_kind = Scenario::ControlKind::Piecewise;
    const auto rows = reader.all("controls", "segment");
    if (rows.empty()) throw ConfigError("controls.segment: at least one segment required");
    for (const auto& row : rows) {
      const VecX v = to_vecx(row, 1 + n, "controls.segment");
      if (v[0] <= 0.0) throw ConfigError("controls.segment: length must be positive");
      sc.segments.emplace_back(v[0], VecX(v.tail(n)));
    }
    return;
  }
  if (kind == "sine") {
    sc.control_kind = Scenario::ControlKind::Sine;
    sc.control_duration = to_double(reader.require("controls", "duration"), "controls.duration");
    if (sc.control_duration <= 0.0) throw ConfigError("controls.duration: must be positive");
    const VecX amp = to_vecx(reader.require("controls", "amplitude"), n, "controls.amplitude");
    const VecX freq = to_vecx(reader.require("controls", "frequency"), n, "controls.frequency");
    VecX phase = VecX::Zero(n), offset = VecX::Zero(n);
    if (const auto v = reader.one("controls", "phase")) phase = to_vecx(*v, n, "controls.phase");
    if (const auto v = reader.one("controls", "offset")) offset = to_vecx(*v, n, "controls.offset");
    for (int i = 0; i < n; ++i)
      sc.sine_channels.push_back({amp[i], freq[i], phase[i], offset[i]});
    return;
  }
  if (kind == "file") {
    sc.control_kind = Scenario::ControlKind::File;
    sc.schedule_path = reader.require("controls", "path");
    return;
  }
  throw ConfigError("controls.kind: expected 'zero', 'piecewise', 'sine' or 'file', got '" + kind +
                    "'");
}

void parse_target(Reader& reader, Scenario& sc) {
  for (const auto& row : reader.all("target", "waypoint")) {
    const VecX v = to_vecx(row, 8, "target.waypoint");
    Scenario::Waypoint wp;
    wp.t = v[0];
    wp.quat = Eigen::Vector4d(v[1], v[2], v[3], v[4]);
    wp.pos = v.segment<3>(5);
    if (wp.quat.norm() < 1e-12) throw ConfigError("target.waypoint: quaternion must be nonzero");
    if (!sc.waypoints.empty() && wp.t <= sc.waypoints.back().t)
      throw ConfigError("target.waypoint: times must be strictly increasing");
    if (sc.waypoints.empty() && wp.t < 0.0)
      throw ConfigError("target.waypoint: times must be nonnegative");
    sc.waypoints.push_back(wp);
  }
}

QuadratureRule scenario_rule(const Scenario& sc) {
  return ball_rule(std::max(16, (sc.quadrature + 3) / 2), sc.quadrature);
}

DensityField scenario_density(const Scenario& sc) {
  if (sc.density_kind == Scenario::DensityKind::Constant)
    return DensityField::constant(sc.density_value);
  return fit_inertia_targets(sc.axes, sc.inertia_targets, sc.density_offset);
}

Eigen::Quaterniond waypoint_quat(const Scenario::Waypoint& wp) {
  Eigen::Quaterniond q(wp.quat[0], wp.quat[1], wp.quat[2], wp.quat[3]);
  q.normalize();
  return q;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  Reader reader(parse_items(path));
  Scenario sc;

  const long long schema = to_integer(reader.require("", "schema"), "schema");
  if (schema != 1) throw ConfigError("schema: only version 1 is supported");
  if (const auto seed = reader.one("", "seed")) sc.seed = to_seed(*seed, "seed");

  parse_shape(reader, sc);
  parse_density(reader, sc);
  parse_movements(reader, sc);
  parse_numerics(reader, sc);
  parse_controls(reader, sc);
  parse_target(reader, sc);

  reader.finish();
  return sc;
}

std::shared_ptr<PiecewiseConstantSchedule> read_schedule_csv(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open schedule file: " + path);

  auto sched = std::make_shared<PiecewiseConstantSchedule>(n);
  std::string line;
  int lineno = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    std::replace(line.begin(), line.end(), ',', ' ');
    line = trim(line);
    if (line.empty()) continue;

    const std::string field = "schedule line " + std::to_string(lineno);
    if (first_content) {
      first_content = false;
      // Allow (and skip) a header row.
      try {
        to_double(line.substr(0, line.find(' ')), field);
      } catch (const ConfigError&) {
        continue;
      }
    }

    const VecX v = to_vecx(line, 2 + n, field);
    const double start = v[0], end = v[1];
    if (end <= start) throw ConfigError(field + ": segment must end after it starts");
    const double expected = sched->duration();
    if (std::abs(start - expected) > 1e-9 * std::max(1.0, std::abs(end)))
      throw ConfigError(field + ": segments must be contiguous from 0");
    sched->append(end - start, v.tail(n));
  }
  if (sched->segments().empty()) throw ConfigError("schedule file has no segments: " + path);
  return sched;
}

SwimmerConfig build_config(const Scenario& scenario) {
  return make_rigid_shell_config(scenario_density(scenario), make_ellipsoid_field(scenario.axes),
                                 scenario.movement_count, scenario_rule(scenario));
}

std::shared_ptr<MassModel> build_mass_model(const Scenario& scenario) {
  if (scenario.mu_source == Scenario::MuSource::Oracle) {
    // Rest-shape inertia and mass need only the base deformation.
    const SwimmerConfig rest{scenario_density(scenario), make_ellipsoid_field(scenario.axes), {}};
    const auto [inertia, mass] = inertia_and_mass(rest, VecX(), scenario_rule(scenario));
    const Mat6 mf = ellipsoid_added_mass(scenario.axes[0], scenario.axes[1], scenario.axes[2]);
    return std::make_shared<ShellTransportModel>(inertia, mass, mf, scenario.movement_count);
  }
  return build_mass_model(scenario, build_config(scenario));
}

std::shared_ptr<MassModel> build_mass_model(const Scenario& scenario, const SwimmerConfig& config) {
  if (scenario.mu_source == Scenario::MuSource::Oracle) return build_mass_model(scenario);
  return std::make_shared<PanelMethodModel>(config, scenario.refinement, scenario_rule(scenario));
}

SchedulePtr build_controls(const Scenario& scenario) {
  const int n = scenario.movement_count;
  SchedulePtr out;
  switch (scenario.control_kind) {
    case Scenario::ControlKind::None:
      throw ConfigError("controls: section required for this command");
    case Scenario::ControlKind::Zero: {
      auto sched = std::make_shared<PiecewiseConstantSchedule>(n);
      sched->append(scenario.control_duration, VecX::Zero(n));
      out = sched;
      break;
    }
    case Scenario::ControlKind::Piecewise: {
      auto sched = std::make_shared<PiecewiseConstantSchedule>(n);
      for (const auto& [length, rates] : scenario.segments) sched->append(length, rates);
      out = sched;
      break;
    }
    case Scenario::ControlKind::Sine:
      out = std::make_shared<SineSchedule>(scenario.sine_channels, scenario.control_duration);
      break;
    case Scenario::ControlKind::File:
      out = read_schedule_csv(scenario.schedule_path, n);
      break;
  }
  if (scenario.mollify_width > 0.0) out = smooth_controls(out, scenario.mollify_width);
  return out;
}

TrackingProblem build_target(const Scenario& scenario) {
  if (scenario.waypoints.empty())
    throw ConfigError("target.waypoint: at least one waypoint required for planning");
  const auto waypoints = scenario.waypoints;
  if (waypoints.back().t <= 0.0)
    throw ConfigError("target.waypoint: horizon must end at a positive time");

  // Piecewise interpolation, held constant outside the waypoint range.
  const auto bracket = [waypoints](double t) -> std::pair<std::size_t, double> {
    if (t <= waypoints.front().t) return {0, 0.0};
    if (t >= waypoints.back().t) return {waypoints.size() - 1, 0.0};
    std::size_t k = 0;
    while (k + 1 < waypoints.size() && waypoints[k + 1].t <= t) ++k;
    if (k + 1 == waypoints.size()) return {k, 0.0};
    return {k, (t - waypoints[k].t) / (waypoints[k + 1].t - waypoints[k].t)};
  };

  TrackingProblem problem;
  problem.duration = waypoints.back().t;
  problem.tolerance = scenario.tolerance;
  problem.target_rot = [waypoints, bracket](double t) -> Mat3 {
    const auto [k, u] = bracket(t);
    if (u == 0.0) return waypoint_quat(waypoints[k]).toRotationMatrix();
    return waypoint_quat(waypoints[k])
        .slerp(u, waypoint_quat(waypoints[k + 1]))
        .toRotationMatrix();
  };
  problem.target_pos = [waypoints, bracket](double t) -> Vec3 {
    const auto [k, u] = bracket(t);
    if (u == 0.0) return waypoints[k].pos;
    return (1.0 - u) * waypoints[k].pos + u * waypoints[k + 1].pos;
  };
  return problem;
}

}  // namespace swim
