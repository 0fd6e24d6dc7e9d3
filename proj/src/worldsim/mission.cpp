#include "gplan/worldsim/mission.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace gplan {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::size_t simulate_depth_scan(const VoxelMap& truth, VoxelMap& map, const Configuration& xi, const RayFan& fan,
                                bool recompute_sdf) {
  if (truth.dims() != map.dims() || truth.origin() != map.origin() || truth.resolution() != map.resolution())
    throw std::invalid_argument("map and ground truth differ in geometry");
  std::size_t changed = 0;
  const auto mark = [&](std::size_t idx, VoxelState s) {
    if (map.state_unchecked(idx) != s) {
      map.set_unchecked(idx, s);
      ++changed;
    }
  };
  const double range = fan.model().max_range;
  fan.for_each_direction(xi.yaw, [&](const Vec3& dir) {
    std::size_t stop = 0;
    const RayOutcome r =
        trace_ray(truth, xi.p, dir, range, [&](std::size_t idx) { mark(idx, VoxelState::Free); }, &stop);
    if (r == RayOutcome::Hit) mark(stop, VoxelState::Occupied);
  });
  if (recompute_sdf && (changed > 0 || map.sdf_dirty())) map.recompute_sdf();
  return changed;
}

std::size_t simulate_depth_scan(const World& world, VoxelMap& map, const Configuration& xi,
                                const DepthSensorModel& depth) {
  VoxelMap truth = rasterize(world, map.resolution());
  return simulate_depth_scan(truth, map, xi, RayFan(depth));
}

VoxelMap blank_like(const VoxelMap& truth) {
  VoxelMap m(truth.origin(), truth.dims(), truth.resolution());
  m.recompute_sdf();
  return m;
}

void update_elevation(ElevationMap& h, const World& world, const VoxelMap& truth, const Vec3& robot,
                      double radius) {
  if (world.heightfield) {
    update_from_heightfield(h, *world.heightfield, robot.head<2>(), radius);
    return;
  }
  h.recenter(robot.head<2>());
  const double r = h.resolution();
  const Eigen::Vector2i own = h.cell_of(robot.x(), robot.y());
  const int reach = static_cast<int>(std::ceil(radius / r)) + 1;
  const VoxelKey top = truth.key_of(robot);
  for (int dj = -reach; dj <= reach; ++dj)
    for (int di = -reach; di <= reach; ++di) {
      const Eigen::Vector2i cell = own + Eigen::Vector2i(di, dj);
      const Vec2 c = h.cell_center(cell);
      if (cell != own && (c - robot.head<2>()).norm() > radius) continue;
      const VoxelKey col = truth.key_of(Vec3(c.x(), c.y(), robot.z()));
      for (int k = std::min(top.k, truth.dims().z() - 1); k >= 0; --k) {
        const VoxelKey key{col.i, col.j, k};
        if (!truth.in_bounds(key)) break;
        if (truth.state(key) == VoxelState::Occupied) {
          h.set_elevation(c.x(), c.y(), truth.center_of(key).z() + 0.5 * truth.resolution());
          break;
        }
      }
    }
}

const char* to_string(Behavior b) {
  switch (b) {
    case Behavior::VE:
      return "ve";
    case Behavior::VI:
      return "vi";
    case Behavior::TR:
      return "tr";
    case Behavior::VEThenVI:
      return "ve_then_vi";
  }
  return "?";
}

Behavior parse_behavior(const std::string& s) {
  if (s == "ve") return Behavior::VE;
  if (s == "vi") return Behavior::VI;
  if (s == "tr") return Behavior::TR;
  if (s == "ve_then_vi") return Behavior::VEThenVI;
  throw std::invalid_argument("unknown behavior '" + s + "'");
}

const char* to_string(MissionStatus s) {
  switch (s) {
    case MissionStatus::Done:
      return "done";
    case MissionStatus::Reached:
      return "reached";
    case MissionStatus::Unreachable:
      return "unreachable";
    case MissionStatus::Failed:
      return "failed";
  }
  return "?";
}

void MissionConfig::validate() const {
  embodiment.validate();
  depth.validate();
  camera.validate();
  exploration.kernel.validate();
  exploration.sampling.validate();
  exploration.gains.validate();
  inspection.validate();
  budget.validate();
  if (behavior == Behavior::TR) target.validate();
  if (!(voxel_resolution > 0.0 && elevation_resolution > 0.0)) throw std::invalid_argument("resolutions must be positive");
  if (!(scan_interval > 0.0)) throw std::invalid_argument("scan interval must be positive");
  if (!(replan_fraction > 0.0 && replan_fraction <= 1.0)) throw std::invalid_argument("replan fraction must lie in (0, 1]");
  if (max_iterations < 1) throw std::invalid_argument("iteration cap must be positive");
  if (graph_snapshot_interval < 0) throw std::invalid_argument("graph snapshot interval must be non-negative");
}

namespace {

class Mission {
 public:
  Mission(const World& world, const MissionConfig& config, std::uint64_t seed)
      : world_(world), cfg_(config), seed_(seed), truth_(rasterize(world, config.voxel_resolution)),
        fan_(config.depth), state_(blank_like(truth_)) {}

  MissionResult run();

 private:
  MapView maps() const { return MapView(state_.map, state_.elevation ? &*state_.elevation : nullptr); }
  void ensure_sdf() {
    if (state_.map.sdf_dirty()) state_.map.recompute_sdf();
  }
  void sample(const std::string& event) {
    const std::size_t known = state_.map.known_count();
    const double r = state_.map.resolution();
    state_.samples.push_back({state_.t, known, static_cast<double>(known) * r * r * r, state_.path_length, event});
  }
  void event(const std::string& tag) {
    state_.events.push_back({state_.t, tag});
    sample(tag);
  }
  void scan() {
    simulate_depth_scan(truth_, state_.map, state_.robot, fan_, false);
    if (state_.elevation)
      update_elevation(*state_.elevation, world_, truth_, state_.robot.p, cfg_.depth.max_range);
    state_.path_log.push_back(state_.robot);
    sample("");
  }
  void record_graph(const GlobalGraphState& global) {
    state_.global_graph = global.graph;
    state_.home = global.home;
    const int every = cfg_.graph_snapshot_interval;
    if (every > 0 && state_.iterations % every == 0) state_.graph_snapshots.emplace_back(state_.iterations, global.graph);
  }
  void initialize();
  /// Follows the path for `fraction` of its length, scanning every Δt_scan.
  void execute(const std::vector<Configuration>& path, double fraction);
  std::uint64_t iteration_seed() { return splitmix64(seed_ + static_cast<std::uint64_t>(state_.iterations)); }

  MissionStatus run_ve();
  MissionStatus run_tr();
  MissionStatus run_vi(bool known_map);

  const World& world_;
  MissionConfig cfg_;
  std::uint64_t seed_;
  VoxelMap truth_;
  RayFan fan_;
  SimState state_;
  std::string message_;
};

void Mission::initialize() {
  const std::optional<Vec3> start = cfg_.start ? cfg_.start : world_.start;
  if (!start) throw std::invalid_argument("no start position");
  Configuration xi(*start, cfg_.start_yaw);
  if (cfg_.embodiment.kind == EmbodimentKind::Ground) {
    state_.elevation.emplace(cfg_.elevation_window, cfg_.elevation_resolution, start->head<2>());
    update_elevation(*state_.elevation, world_, truth_, xi.p, cfg_.depth.max_range);
    if (const auto z = state_.elevation->elevation_at(xi.p.x(), xi.p.y()))
      xi.p.z() = *z + cfg_.embodiment.footprint.clearance;
  }
  // The volume the robot occupies is known to be free.
  const Vec3 half = cfg_.embodiment.half_extents() + Vec3::Constant(truth_.resolution());
  truth_.for_each_in_box(xi.p - half, xi.p + half, [&](std::size_t idx) {
    if (truth_.state_unchecked(idx) == VoxelState::Free) state_.map.set_unchecked(idx, VoxelState::Free);
    return true;
  });
  state_.robot = xi;
  scan();
  ensure_sdf();
  const auto check = validate_vertex(cfg_.embodiment, maps(), xi);
  if (!check.ok()) throw std::runtime_error(std::string("start not admissible: ") + to_string(check.reason));
  state_.robot = *check.accepted;
  event("start");
}

void Mission::execute(const std::vector<Configuration>& path, double fraction) {
  if (path.size() < 2) return;
  ensure_sdf();
  for (std::size_t i = 1; i < path.size(); ++i)
    if (!validate_edge(cfg_.embodiment, maps(), path[i - 1], path[i])) ++state_.replay_violations;

  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) total += (path[i].p - path[i - 1].p).norm();
  const double stop = fraction >= 1.0 ? total : fraction * total;
  const double ds = cfg_.budget.v_nom * cfg_.scan_interval;
  double travelled = 0.0, next_scan = ds;
  for (std::size_t i = 1; i < path.size() && travelled <= stop; ++i) {
    const Vec3 a = path[i - 1].p, b = path[i].p;
    const double len = (b - a).norm();
    const double seg_start = travelled;
    const double seg_end = std::min(seg_start + len, stop);
    const auto at = [&](double s) {
      const double u = len > 0.0 ? (s - seg_start) / len : 1.0;
      return Configuration(a + (b - a) * u, path[i].yaw, path[i].pitch);
    };
    while (next_scan <= seg_end) {
      state_.robot = at(next_scan);
      state_.t += (next_scan - travelled) / cfg_.budget.v_nom;
      state_.path_length += next_scan - travelled;
      travelled = next_scan;
      next_scan += ds;
      scan();
    }
    state_.t += (seg_end - travelled) / cfg_.budget.v_nom;
    state_.path_length += seg_end - travelled;
    travelled = seg_end;
    state_.robot = seg_end >= seg_start + len ? path[i] : at(seg_end);
  }
  scan();
}

MissionStatus Mission::run_ve() {
  ExplorationPlanner planner(cfg_.embodiment, cfg_.depth, cfg_.exploration);
  while (state_.iterations < cfg_.max_iterations) {
    ensure_sdf();
    MissionBudget budget = cfg_.budget;
    budget.t = state_.t;
    const VeDecision d = planner.plan(state_.robot, maps(), budget, iteration_seed());
    ++state_.iterations;
    event(to_string(d.action));
    record_graph(planner.global());
    if (d.action == VeAction::Done) return MissionStatus::Done;
    const Vec3 from = state_.robot.p;
    execute(d.path, d.action == VeAction::LocalPath ? cfg_.replan_fraction : 1.0);
    planner.record_motion(from, state_.robot.p);
  }
  message_ = "iteration cap reached";
  return MissionStatus::Failed;
}

MissionStatus Mission::run_tr() {
  TargetReachParams tp = cfg_.target;
  if (cfg_.target_from_world) {
    if (!world_.target) throw std::invalid_argument("world has no target");
    tp.target = *world_.target;
  }
  TargetReachPlanner planner(cfg_.embodiment, cfg_.depth, tp, cfg_.exploration);
  while (state_.iterations < cfg_.max_iterations) {
    ensure_sdf();
    const TrDecision d = planner.plan(state_.robot, maps(), iteration_seed());
    ++state_.iterations;
    record_graph(planner.global());
    if (d.frontier_switch) event("frontier_switch");
    if (d.stalled) event("stalled");
    if (d.action == TrAction::Reached) {
      event("reached");
      return MissionStatus::Reached;
    }
    if (d.action == TrAction::Unreachable) {
      event("unreachable");
      return MissionStatus::Unreachable;
    }
    event("local");
    execute(d.path, cfg_.replan_fraction);
  }
  message_ = "iteration cap reached";
  return MissionStatus::Failed;
}

MissionStatus Mission::run_vi(bool known_map) {
  if (known_map) {
    state_.map = truth_;
    ensure_sdf();
  }
  const Aabb region = cfg_.inspection_region ? *cfg_.inspection_region : world_.bounds;
  state_.inspection_targets = occupied_in_region(state_.map, region);
  ensure_sdf();
  const InspectionPlan plan =
      plan_vi(state_.robot, maps(), state_.inspection_targets, region, cfg_.camera, cfg_.embodiment,
              cfg_.exploration.kernel, cfg_.exploration.sampling, cfg_.inspection, iteration_seed());
  ++state_.iterations;
  event(plan.path.empty() ? "vi_empty" : "vi");
  execute(plan.path, 1.0);
  state_.inspected = observed_targets(truth_, plan.path, cfg_.camera, state_.inspection_targets);
  event("done");
  return MissionStatus::Done;
}

MissionResult Mission::run() {
  MissionResult result{MissionStatus::Failed, "", SimState(VoxelMap(Vec3::Zero(), Vec3i(1, 1, 1), 1.0)), {}};
  try {
    cfg_.validate();
    initialize();
    switch (cfg_.behavior) {
      case Behavior::VE:
        result.status = run_ve();
        break;
      case Behavior::TR:
        result.status = run_tr();
        break;
      case Behavior::VI:
        result.status = run_vi(true);
        break;
      case Behavior::VEThenVI:
        result.status = run_ve();
        if (result.status == MissionStatus::Done) result.status = run_vi(false);
        break;
    }
    result.message = message_;
  } catch (const std::exception& e) {
    result.status = MissionStatus::Failed;
    result.message = e.what();
  }
  if (result.status == MissionStatus::Failed) event("failed");
  ensure_sdf();
  result.state = std::move(state_);
  result.metrics = compute_metrics(result.state);
  return result;
}

}  // namespace

MissionResult run_mission(const World& world, const MissionConfig& config, std::uint64_t seed) {
  return Mission(world, config, seed).run();
}

double trapezoid_auc(const std::vector<MetricsSample>& samples) {
  double auc = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i)
    auc += 0.5 * (samples[i].explored_m3 + samples[i - 1].explored_m3) * (samples[i].t - samples[i - 1].t);
  return auc;
}

MetricsLog compute_metrics(const SimState& state, const std::vector<VoxelKey>& residual_surface) {
  MetricsLog log;
  log.samples = state.samples;
  log.auc = trapezoid_auc(state.samples);
  log.duration = state.t;
  log.path_length = state.path_length;
  std::vector<VoxelKey> res = residual_surface;
  std::sort(res.begin(), res.end());
  std::size_t denom = 0, seen = 0;
  for (const auto& key : state.inspection_targets) {
    if (std::binary_search(res.begin(), res.end(), key)) continue;
    ++denom;
    if (std::binary_search(state.inspected.begin(), state.inspected.end(), key)) ++seen;
  }
  log.coverage = denom == 0 ? 1.0 : static_cast<double>(seen) / static_cast<double>(denom);
  return log;
}

void write_plan_graph(std::ostream& os, const PlanGraph& g) {
  char buf[200];
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const Vertex& x = g.vertex(v);
    std::snprintf(buf, sizeof buf, "v %zu %.6f %.6f %.6f %.6f %.6f %d\n", static_cast<std::size_t>(v), x.xi.p.x(),
                  x.xi.p.y(), x.xi.p.z(), x.xi.yaw, x.gain, x.frontier ? 1 : 0);
    os << buf;
  }
  for (const Edge& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "e %zu %zu %.6f\n", static_cast<std::size_t>(e.a), static_cast<std::size_t>(e.b),
                  e.length);
    os << buf;
  }
}

void write_metrics_csv(std::ostream& os, const MetricsLog& log) {
  os << "t,explored_voxels,explored_m3,path_len_m,event\n";
  char buf[160];
  for (const auto& s : log.samples) {
    std::snprintf(buf, sizeof buf, "%.3f,%zu,%.6f,%.6f,", s.t, s.explored_voxels, s.explored_m3, s.path_length);
    os << buf << s.event << '\n';
  }
}

}  // namespace gplan
