#include "gplan/cli/run_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace gplan {

namespace pt = boost::property_tree;

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + message : source + ": " + message),
      line_(line) {}

namespace {

struct BadValue : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) throw BadValue("expected a number, got '" + s + "'");
  return v;
}

long long to_int(const std::string& s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw BadValue("expected an integer, got '" + s + "'");
  return v;
}

int to_int32(const std::string& s) {
  const long long v = to_int(s);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) throw BadValue("integer out of range");
  return static_cast<int>(v);
}

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw BadValue("expected an unsigned integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw BadValue("expected true or false, got '" + s + "'");
}

std::vector<double> to_doubles(const std::string& s, std::size_t n) {
  const auto w = words(s);
  if (w.size() != n) throw BadValue("expected " + std::to_string(n) + " numbers, got '" + s + "'");
  std::vector<double> out;
  for (const auto& x : w) out.push_back(to_double(x));
  return out;
}

Vec3 to_vec3(const std::string& s) {
  const auto v = to_doubles(s, 3);
  return {v[0], v[1], v[2]};
}

Vec2 to_vec2(const std::string& s) {
  const auto v = to_doubles(s, 2);
  return {v[0], v[1]};
}

Aabb to_aabb(const std::string& s) {
  const auto v = to_doubles(s, 6);
  return {Vec3(v[0], v[1], v[2]), Vec3(v[3], v[4], v[5])};
}

// Drops a trailing "; comment" or "# comment".
std::string strip_comment(const std::string& s) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if ((s[i] == ';' || s[i] == '#') && (s[i - 1] == ' ' || s[i - 1] == '\t')) return trim(s.substr(0, i));
  return trim(s);
}

bool is_none(const std::string& s) { return s.empty() || s == "none"; }

std::string fmt(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Degrees such that reading them back gives exactly `rad`.
std::string fmt_deg(double rad) {
  double d = rad2deg(rad);
  for (int i = 0; i < 8 && deg2rad(d) != rad; ++i) d = std::nextafter(d, deg2rad(d) < rad ? HUGE_VAL : -HUGE_VAL);
  return fmt(d);
}

std::string fmt(const Vec3& v) { return fmt(v.x()) + " " + fmt(v.y()) + " " + fmt(v.z()); }
std::string fmt(const Vec2& v) { return fmt(v.x()) + " " + fmt(v.y()); }
std::string fmt(const Aabb& b) { return fmt(b.min) + " " + fmt(b.max); }
std::string fmt(bool b) { return b ? "true" : "false"; }

struct Field {
  const char* section;
  const char* key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define GPLAN_FIELD(sec, key, setter, getter)                                          \
  Field {                                                                              \
    sec, key, [](RunConfig& c, const std::string& v) { setter; },                      \
        [](const RunConfig& c) -> std::string { return getter; }                       \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      GPLAN_FIELD("run", "behavior", c.mission.behavior = parse_behavior(v), to_string(c.mission.behavior)),
      GPLAN_FIELD("run", "seed", c.seed = to_u64(v), std::to_string(c.seed)),
      GPLAN_FIELD("run", "trials", c.trials = to_int32(v), std::to_string(c.trials)),
      GPLAN_FIELD("run", "max_iterations", c.mission.max_iterations = to_int32(v), std::to_string(c.mission.max_iterations)),
      GPLAN_FIELD("run", "replan_fraction", c.mission.replan_fraction = to_double(v), fmt(c.mission.replan_fraction)),
      GPLAN_FIELD("run", "scan_interval", c.mission.scan_interval = to_double(v), fmt(c.mission.scan_interval)),
      GPLAN_FIELD("run", "voxel_resolution", c.mission.voxel_resolution = to_double(v), fmt(c.mission.voxel_resolution)),
      GPLAN_FIELD("run", "elevation_resolution", c.mission.elevation_resolution = to_double(v),
                  fmt(c.mission.elevation_resolution)),
      GPLAN_FIELD("run", "elevation_window", c.mission.elevation_window = to_vec2(v), fmt(c.mission.elevation_window)),
      GPLAN_FIELD("run", "start", if (is_none(v)) c.mission.start.reset(); else c.mission.start = to_vec3(v),
                  c.mission.start ? fmt(*c.mission.start) : "none"),
      GPLAN_FIELD("run", "start_yaw_deg", c.mission.start_yaw = deg2rad(to_double(v)), fmt_deg(c.mission.start_yaw)),
      GPLAN_FIELD("run", "graph_dump_interval", c.mission.graph_snapshot_interval = to_int32(v),
                  std::to_string(c.mission.graph_snapshot_interval)),
      GPLAN_FIELD("run", "out_dir", c.out_dir = v, c.out_dir),

      GPLAN_FIELD("embodiment", "kind", c.mission.embodiment.kind = parse_embodiment_kind(v),
                  to_string(c.mission.embodiment.kind)),
      GPLAN_FIELD("embodiment", "box", c.mission.embodiment.box = to_vec3(v), fmt(c.mission.embodiment.box)),
      GPLAN_FIELD("embodiment", "max_slope_deg", c.mission.embodiment.max_slope = deg2rad(to_double(v)),
                  fmt_deg(c.mission.embodiment.max_slope)),
      GPLAN_FIELD("embodiment", "footprint_half_length", c.mission.embodiment.footprint.half_length = to_double(v),
                  fmt(c.mission.embodiment.footprint.half_length)),
      GPLAN_FIELD("embodiment", "footprint_half_width", c.mission.embodiment.footprint.half_width = to_double(v),
                  fmt(c.mission.embodiment.footprint.half_width)),
      GPLAN_FIELD("embodiment", "clearance", c.mission.embodiment.footprint.clearance = to_double(v),
                  fmt(c.mission.embodiment.footprint.clearance)),
      GPLAN_FIELD("embodiment", "max_proximity",
                  if (is_none(v)) c.mission.embodiment.max_proximity.reset();
                  else c.mission.embodiment.max_proximity = to_double(v),
                  c.mission.embodiment.max_proximity ? fmt(*c.mission.embodiment.max_proximity) : "none"),

      GPLAN_FIELD("depth", "fov_h_deg", c.mission.depth.fov_h = deg2rad(to_double(v)), fmt_deg(c.mission.depth.fov_h)),
      GPLAN_FIELD("depth", "fov_v_deg", c.mission.depth.fov_v = deg2rad(to_double(v)), fmt_deg(c.mission.depth.fov_v)),
      GPLAN_FIELD("depth", "max_range", c.mission.depth.max_range = to_double(v), fmt(c.mission.depth.max_range)),
      GPLAN_FIELD("depth", "ray_resolution_deg", c.mission.depth.ray_resolution = deg2rad(to_double(v)),
                  fmt_deg(c.mission.depth.ray_resolution)),

      GPLAN_FIELD("camera", "fov_h_deg", c.mission.camera.fov_h = deg2rad(to_double(v)), fmt_deg(c.mission.camera.fov_h)),
      GPLAN_FIELD("camera", "fov_v_deg", c.mission.camera.fov_v = deg2rad(to_double(v)), fmt_deg(c.mission.camera.fov_v)),
      GPLAN_FIELD("camera", "min_range", c.mission.camera.min_range = to_double(v), fmt(c.mission.camera.min_range)),
      GPLAN_FIELD("camera", "max_range", c.mission.camera.max_range = to_double(v), fmt(c.mission.camera.max_range)),
      GPLAN_FIELD("camera", "pitch_actuated", c.mission.camera.pitch_actuated = to_bool(v),
                  fmt(c.mission.camera.pitch_actuated)),
      GPLAN_FIELD("camera", "mount_pitch_deg", c.mission.camera.mount_pitch = deg2rad(to_double(v)),
                  fmt_deg(c.mission.camera.mount_pitch)),
      GPLAN_FIELD("camera", "pitch_min_deg", c.mission.camera.pitch_min = deg2rad(to_double(v)),
                  fmt_deg(c.mission.camera.pitch_min)),
      GPLAN_FIELD("camera", "pitch_max_deg", c.mission.camera.pitch_max = deg2rad(to_double(v)),
                  fmt_deg(c.mission.camera.pitch_max)),

      GPLAN_FIELD("kernel", "local_box", c.mission.exploration.kernel.local_box = to_vec3(v),
                  fmt(c.mission.exploration.kernel.local_box)),
      GPLAN_FIELD("kernel", "e_max", c.mission.exploration.kernel.e_max = to_double(v),
                  fmt(c.mission.exploration.kernel.e_max)),
      GPLAN_FIELD("kernel", "max_vertices", c.mission.exploration.kernel.max_vertices = to_int32(v),
                  std::to_string(c.mission.exploration.kernel.max_vertices)),
      GPLAN_FIELD("kernel", "max_edges", c.mission.exploration.kernel.max_edges = to_int32(v),
                  std::to_string(c.mission.exploration.kernel.max_edges)),
      GPLAN_FIELD("kernel", "tracking_distance", c.mission.exploration.kernel.tracking_distance = to_double(v),
                  fmt(c.mission.exploration.kernel.tracking_distance)),
      GPLAN_FIELD("kernel", "builder", c.mission.exploration.kernel.builder = parse_graph_builder(v),
                  to_string(c.mission.exploration.kernel.builder)),
      GPLAN_FIELD("kernel", "batch_size", c.mission.exploration.kernel.batch_size = to_int32(v),
                  std::to_string(c.mission.exploration.kernel.batch_size)),
      GPLAN_FIELD("kernel", "max_attempts_per_vertex", c.mission.exploration.kernel.max_attempts_per_vertex = to_int32(v),
                  std::to_string(c.mission.exploration.kernel.max_attempts_per_vertex)),
      GPLAN_FIELD("kernel", "max_batch_rounds", c.mission.exploration.kernel.max_batch_rounds = to_int32(v),
                  std::to_string(c.mission.exploration.kernel.max_batch_rounds)),
      GPLAN_FIELD("kernel", "cluster_radius", c.mission.exploration.kernel.cluster_radius = to_double(v),
                  fmt(c.mission.exploration.kernel.cluster_radius)),
      GPLAN_FIELD("kernel", "fuse_tolerance", c.mission.exploration.fuse_tolerance = to_double(v),
                  fmt(c.mission.exploration.fuse_tolerance)),

      GPLAN_FIELD("sampling", "kind", c.mission.exploration.sampling.kind = parse_sampling_kind(v),
                  to_string(c.mission.exploration.sampling.kind)),
      GPLAN_FIELD("sampling", "sigma", c.mission.exploration.sampling.sigma = to_vec3(v),
                  fmt(c.mission.exploration.sampling.sigma)),
      GPLAN_FIELD("sampling", "eta", c.mission.exploration.sampling.eta = to_double(v),
                  fmt(c.mission.exploration.sampling.eta)),

      GPLAN_FIELD("gains", "mu_l", c.mission.exploration.gains.mu_l = to_double(v), fmt(c.mission.exploration.gains.mu_l)),
      GPLAN_FIELD("gains", "mu_d", c.mission.exploration.gains.mu_d = to_double(v), fmt(c.mission.exploration.gains.mu_d)),
      GPLAN_FIELD("gains", "frontier_threshold", c.mission.exploration.gains.frontier_threshold = to_double(v),
                  fmt(c.mission.exploration.gains.frontier_threshold)),
      GPLAN_FIELD("gains", "direction_window", c.mission.exploration.gains.direction_window = to_int32(v),
                  std::to_string(c.mission.exploration.gains.direction_window)),

      GPLAN_FIELD("budget", "endurance", c.mission.budget.endurance = to_double(v), fmt(c.mission.budget.endurance)),
      GPLAN_FIELD("budget", "v_nom", c.mission.budget.v_nom = to_double(v), fmt(c.mission.budget.v_nom)),

      GPLAN_FIELD("target", "position",
                  if (is_none(v)) c.mission.target_from_world = true;
                  else {
                    c.mission.target_from_world = false;
                    c.mission.target.target = to_vec3(v);
                  },
                  c.mission.target_from_world ? "none" : fmt(c.mission.target.target)),
      GPLAN_FIELD("target", "reach_radius", c.mission.target.reach_radius = to_double(v),
                  fmt(c.mission.target.reach_radius)),
      GPLAN_FIELD("target", "target_radius", c.mission.target.target_radius = to_double(v),
                  fmt(c.mission.target.target_radius)),
      GPLAN_FIELD("target", "lookahead", c.mission.target.lookahead = to_double(v), fmt(c.mission.target.lookahead)),
      GPLAN_FIELD("target", "stall_limit", c.mission.target.stall_limit = to_int32(v),
                  std::to_string(c.mission.target.stall_limit)),

      GPLAN_FIELD("inspection", "region",
                  if (is_none(v)) c.mission.inspection_region.reset(); else c.mission.inspection_region = to_aabb(v),
                  c.mission.inspection_region ? fmt(*c.mission.inspection_region) : "none"),
      GPLAN_FIELD("inspection", "position_samples", c.mission.inspection.position_samples = to_int32(v),
                  std::to_string(c.mission.inspection.position_samples)),
      GPLAN_FIELD("inspection", "yaw_count", c.mission.inspection.yaw_count = to_int32(v),
                  std::to_string(c.mission.inspection.yaw_count)),
      GPLAN_FIELD("inspection", "pitch_count", c.mission.inspection.pitch_count = to_int32(v),
                  std::to_string(c.mission.inspection.pitch_count)),
  };
  return table;
}

#undef GPLAN_FIELD

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields())
    if (section == f.section && key == f.key) return &f;
  return nullptr;
}

// "section.key" -> line, for diagnostics.
std::map<std::string, int> key_lines(const std::string& text) {
  std::map<std::string, int> out;
  std::istringstream is(text);
  std::string section, line;
  for (int n = 1; std::getline(is, line); ++n) {
    line = trim(line);
    if (line.empty() || line[0] == ';' || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      out.emplace(section, n);
    } else if (const auto eq = line.find('='); eq != std::string::npos) {
      out.emplace(section + "." + trim(line.substr(0, eq)), n);
    }
  }
  return out;
}

struct Setting {
  std::string section, key, value;
  int line = 0;
  std::string source;
};

void apply_setting(RunConfig& c, const Setting& s) {
  try {
    if (s.section == "world") {
      if (s.key == "kind") {
        c.world.kind = s.value;
        if (!s.value.empty()) parse_world_kind(s.value);
      } else if (s.key == "file") {
        c.world.file = s.value;
      } else if (s.key == "seed") {
        c.world.seed = to_u64(s.value);
      } else {
        c.world.params[s.key] = to_double(s.value);
      }
      return;
    }
    const Field* f = find_field(s.section, s.key);
    if (!f) throw BadValue("unknown key '" + s.section + "." + s.key + "'");
    f->set(c, s.value);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(s.source, s.line, e.what());
  }
}

RunConfig build(const std::vector<Setting>& settings, const std::string& source, const std::string& base_dir) {
  RunConfig c;
  // The preset goes first so that explicit keys override it.
  for (const auto& s : settings)
    if (s.section == "run" && s.key == "preset") {
      c.preset = s.value;
      try {
        if (!is_none(s.value)) apply_preset(c.mission, s.value);
      } catch (const std::exception& e) {
        throw ConfigError(s.source, s.line, e.what());
      }
    }
  for (const auto& s : settings)
    if (!(s.section == "run" && s.key == "preset")) apply_setting(c, s);

  if (!c.world.kind.empty() && !c.world.file.empty()) throw ConfigError(source, 0, "[world] sets both kind and file");
  if (!c.world.file.empty() && !base_dir.empty() && std::filesystem::path(c.world.file).is_relative())
    c.world.file = (std::filesystem::path(base_dir) / c.world.file).string();
  if (c.trials < 1) throw ConfigError(source, 0, "run.trials must be at least 1");
  try {
    c.mission.validate();
  } catch (const std::exception& e) {
    throw ConfigError(source, 0, e.what());
  }
  return c;
}

std::vector<Setting> override_settings(const std::vector<std::string>& overrides) {
  std::vector<Setting> out;
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
      throw ConfigError("--set", 0, "expected section.key=value, got '" + o + "'");
    out.push_back({trim(o.substr(0, dot)), trim(o.substr(dot + 1, eq - dot - 1)), trim(o.substr(eq + 1)), 0,
                   "--set " + o});
  }
  return out;
}

}  // namespace

void apply_preset(MissionConfig& config, const std::string& name) {
  DepthSensorModel depth;
  double res = 0.2;
  if (name == "aerial_cave") {
    config.embodiment = EmbodimentSpec::aerial(Vec3::Constant(0.6));
  } else if (name == "aerial_confined") {
    config.embodiment = EmbodimentSpec::aerial(Vec3::Constant(0.6));
    depth.fov_h = deg2rad(100.0);
    depth.fov_v = deg2rad(70.0);
  } else if (name == "ground_mine") {
    config.embodiment = EmbodimentSpec::ground(Vec3(0.6, 0.4, 0.5), 0.5, deg2rad(30.0));
    res = 0.3;
  } else if (name == "underwater") {
    config.embodiment = EmbodimentSpec::underwater(Vec3(0.6, 0.6, 0.4), 2.0);
    depth.fov_h = deg2rad(90.0);
    depth.fov_v = deg2rad(90.0);
    res = 0.4;
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  config.depth = depth;
  config.voxel_resolution = res;
  config.elevation_resolution = res;
  config.exploration.fuse_tolerance = 0.5 * res;
}

RunConfig parse_run_config(std::istream& is, const std::string& source, const std::vector<std::string>& overrides,
                           const std::string& base_dir) {
  const std::string text{std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source, static_cast<int>(e.line()), e.message());
  }
  const auto lines = key_lines(text);
  const auto line_of = [&](const std::string& k) {
    const auto it = lines.find(k);
    return it == lines.end() ? 0 : it->second;
  };
  std::vector<Setting> settings;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError(source, line_of("." + section), "key '" + section + "' outside a section");
    for (const auto& [key, value] : body)
      settings.push_back({section, key, strip_comment(value.data()), line_of(section + "." + key), source});
  }
  for (auto& s : override_settings(overrides)) settings.push_back(std::move(s));
  return build(settings, source, base_dir);
}

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  return parse_run_config(in, path, overrides, std::filesystem::path(path).parent_path().string());
}

RunConfig default_run_config(const std::vector<std::string>& overrides) {
  return build(override_settings(overrides), "<defaults>", "");
}

void write_run_config(std::ostream& os, const RunConfig& c) {
  os << "[run]\n";
  if (!c.preset.empty()) os << "preset = " << c.preset << "\n";
  std::string section = "run";
  for (const auto& f : fields()) {
    if (section != f.section) {
      section = f.section;
      os << "\n[" << section << "]\n";
    }
    os << f.key << " = " << f.get(c) << "\n";
  }
  os << "\n[world]\n";
  if (!c.world.kind.empty()) os << "kind = " << c.world.kind << "\n";
  if (!c.world.file.empty()) os << "file = " << c.world.file << "\n";
  os << "seed = " << c.world.seed << "\n";
  for (const auto& [k, v] : c.world.params) os << k << " = " << fmt(v) << "\n";
}

World load_world(const WorldSource& source) {
  if (!source.file.empty()) return read_world_file(source.file);
  if (source.kind.empty()) throw ConfigError("[world]", 0, "missing world: set world.kind or world.file");
  return generate_world(parse_world_kind(source.kind), source.params, source.seed);
}

}  // namespace gplan
