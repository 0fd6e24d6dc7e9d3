// Acceptance suite: one PASS/FAIL line per criterion.
#include "gplan/behaviors/inspection.hpp"
#include "gplan/worldsim/bench.hpp"
#include "gplan/worldsim/oracles.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace gplan;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

std::string format(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string csv_of(const MissionResult& r) {
  std::ostringstream os;
  write_metrics_csv(os, r.metrics);
  return os.str();
}

// Missions whose CSVs are re-run for the determinism criterion.
struct Replay {
  std::string label;
  const World* world;
  MissionConfig config;
  std::uint64_t seed;
  std::string csv;
};
std::vector<Replay> replays;
std::vector<World> replay_worlds;  // stable storage, reserved up front

void remember(const std::string& label, const World& w, const MissionConfig& cfg, std::uint64_t seed,
              const MissionResult& r) {
  replay_worlds.push_back(w);
  replays.push_back({label, &replay_worlds.back(), cfg, seed, csv_of(r)});
}

// ---- independent reference implementations ----

std::vector<double> brute_sdf(const VoxelMap& m) {
  std::vector<Vec3> occ;
  for (std::size_t i = 0; i < m.voxel_count(); ++i)
    if (m.state_unchecked(i) == VoxelState::Occupied) occ.push_back(m.center_of(m.key_at(i)));
  std::vector<double> out(m.voxel_count(), VoxelMap::kNoSurface);
  for (std::size_t i = 0; i < m.voxel_count(); ++i) {
    if (occ.empty()) continue;
    const Vec3 c = m.center_of(m.key_at(i));
    double best2 = std::numeric_limits<double>::infinity();
    for (const auto& o : occ) best2 = std::min(best2, (c - o).squaredNorm());
    // Squared grid distance in voxel units, rounded to the integer it is.
    const double cells = std::round(best2 / (m.resolution() * m.resolution()));
    out[i] = std::sqrt(cells) * m.resolution();
  }
  return out;
}

std::vector<double> enumerate_paths(const PlanGraph& g, VertexId root) {
  std::vector<double> best(g.vertex_count(), std::numeric_limits<double>::infinity());
  std::vector<char> on(g.vertex_count(), 0);
  std::function<void(VertexId, double)> walk = [&](VertexId u, double d) {
    best[u] = std::min(best[u], d);
    on[u] = 1;
    for (const auto& [v, len] : g.neighbors(u))
      if (!on[v]) walk(v, d + len);
    on[u] = 0;
  };
  walk(root, 0.0);
  return best;
}

double optimal_open_tour(const std::vector<std::vector<double>>& d, std::size_t start) {
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (i != start) rest.push_back(i);
  double best = std::numeric_limits<double>::infinity();
  do {
    double len = 0.0;
    std::size_t at = start;
    for (std::size_t v : rest) {
      len += d[at][v];
      at = v;
    }
    best = std::min(best, len);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

std::size_t cover_size(const std::vector<ViewpointCandidate>& c, const std::vector<std::size_t>& pick) {
  std::set<VoxelKey> s;
  for (std::size_t i : pick) s.insert(c[i].covered.begin(), c[i].covered.end());
  return s.size();
}

std::size_t optimal_cover(const std::vector<ViewpointCandidate>& c, std::size_t k) {
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << c.size()); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    std::vector<std::size_t> pick;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (mask & (1u << i)) pick.push_back(i);
    best = std::max(best, cover_size(c, pick));
  }
  return best;
}

// ---- criteria ----

Outcome c1_sdf() {
  Outcome o;
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> dim(1, 16);
  std::uniform_real_distribution<double> density(0.0, 0.3);
  for (int t = 0; t < 50; ++t) {
    VoxelMap m(Vec3::Zero(), Vec3i(dim(rng), dim(rng), dim(rng)), 0.2);
    std::bernoulli_distribution occ(t % 10 == 0 ? 0.0 : density(rng));
    for (std::size_t i = 0; i < m.voxel_count(); ++i)
      m.set_unchecked(i, occ(rng) ? VoxelState::Occupied : VoxelState::Free);
    m.recompute_sdf();
    const auto ref = brute_sdf(m);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < m.voxel_count(); ++i) bad += m.sdf(m.key_at(i)) != ref[i];
    o.require(bad == 0, format("grid %d: %zu voxels differ", t, bad));
  }
  o.note("50 grids");
  return o;
}

Outcome c2_shortest_paths() {
  Outcome o;
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(0.0, 5.0), coin(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng() % 10);
    PlanGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex(Configuration(Vec3(u(rng), u(rng), u(rng))));
    const double p = coin(rng);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (coin(rng) < p) g.add_edge(i, j);
    const VertexId root = static_cast<VertexId>(rng() % n);
    const PathSet sp = shortest_paths(g, root);
    const auto ref = enumerate_paths(g, root);
    for (int v = 0; v < n; ++v) {
      const bool same = std::isinf(ref[v]) ? !sp.reachable(v) : sp.dist[v] == ref[v];
      o.require(same, format("graph %d vertex %d", t, v));
    }
  }
  o.note("100 graphs");
  return o;
}

Outcome c3_tsp() {
  Outcome o;
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  double worst = 1.0;
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + static_cast<int>(rng() % 9);
    std::vector<Vec3> pts;
    for (int i = 0; i < n; ++i) pts.emplace_back(u(rng), u(rng), u(rng));
    std::vector<std::vector<double>> d(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = (pts[i] - pts[j]).norm();
    const std::size_t start = rng() % n;
    const auto tour = solve_tsp(d, start);
    const double opt = optimal_open_tour(d, start);
    const double len = tour_length(d, tour);
    const bool perm = tour.size() == static_cast<std::size_t>(n) && tour.front() == start &&
                      std::set<std::size_t>(tour.begin(), tour.end()).size() == tour.size();
    o.require(perm, format("instance %d: not an open tour from the start", t));
    o.require(len <= 1.05 * opt + 1e-12, format("instance %d: %.6f > 1.05 x %.6f", t, len, opt));
    if (opt > 0.0) worst = std::max(worst, len / opt);
  }
  const std::vector<Vec2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<std::vector<double>> d(4, std::vector<double>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d[i][j] = (sq[i] - sq[j]).norm();
  const double square = tour_length(d, solve_tsp(d, 0));
  o.require(square == 3.0, format("unit square %.17g", square));
  o.note(format("worst ratio %.4f, unit square %.1f", worst, square));
  return o;
}

Outcome c4_greedy() {
  Outcome o;
  std::mt19937_64 rng(404);
  const double bound = 1.0 - 1.0 / std::exp(1.0);
  double worst = 1.0;
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const int universe = 8 + static_cast<int>(rng() % 25);
    std::uniform_int_distribution<int> size(0, universe / 2), elem(0, universe - 1);
    std::vector<ViewpointCandidate> cands;
    for (int i = 0; i < n; ++i) {
      std::set<VoxelKey> s;
      for (int m = size(rng); m > 0; --m) s.insert({elem(rng), 0, 0});
      cands.push_back({Configuration(Vec3::Zero()), std::vector<VoxelKey>(s.begin(), s.end())});
    }
    std::vector<VoxelKey> targets;
    for (int i = 0; i < universe; ++i) targets.push_back({i, 0, 0});
    const auto sel = greedy_coverage_selection(cands, targets);
    o.require(sel.covered == cover_size(cands, sel.chosen), format("instance %d: reported coverage", t));
    std::vector<std::size_t> prefix;
    for (std::size_t k = 0; k < sel.chosen.size(); ++k) {
      prefix.push_back(sel.chosen[k]);
      const double got = static_cast<double>(cover_size(cands, prefix));
      const double opt = static_cast<double>(optimal_cover(cands, k + 1));
      o.require(got >= bound * opt - 1e-12, format("instance %d, k=%zu: %.0f < (1-1/e) x %.0f", t, k + 1, got, opt));
      if (opt > 0) worst = std::min(worst, got / opt);
    }
  }
  o.note(format("worst greedy/optimal %.3f", worst));
  return o;
}

Outcome c5_ve_completion(std::vector<MissionResult>& aerial) {
  Outcome o;
  for (WorldKind kind : {WorldKind::TCorridor, WorldKind::SixRooms}) {
    const World w = generate_world(kind);
    MissionConfig cfg;
    cfg.behavior = Behavior::VE;
    const VoxelMap truth = rasterize(w, cfg.voxel_resolution);
    OracleOptions oo;
    oo.resolution = cfg.voxel_resolution;
    oo.voxel_limit = 1000000;
    oo.reachable_from = w.start;
    const auto residual = residual_volume_oracle(w, cfg.embodiment, cfg.depth, oo);
    const auto reach = free_component(truth, *w.start);
    std::vector<char> excluded(truth.voxel_count(), 0);
    for (const auto& k : residual) excluded[truth.index_of(k)] = 1;
    double lowest = 1.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const MissionResult r = run_mission(w, cfg, seed);
      std::size_t denom = 0, known = 0;
      for (std::size_t i = 0; i < truth.voxel_count(); ++i) {
        if (!reach[i] || excluded[i]) continue;
        ++denom;
        known += r.state.map.state_unchecked(i) != VoxelState::Unknown;
      }
      const double frac = denom ? static_cast<double>(known) / static_cast<double>(denom) : 1.0;
      lowest = std::min(lowest, frac);
      o.require(r.status == MissionStatus::Done,
                format("%s seed %lu ended %s %s", w.name.c_str(), seed, to_string(r.status), r.message.c_str()));
      o.require(frac >= 0.95, format("%s seed %lu classified %.4f", w.name.c_str(), seed, frac));
      if (seed == 1) remember("ve " + w.name, w, cfg, seed, r);
      aerial.push_back(r);
    }
    o.note(format("%s min classified %.4f (residual %zu voxels)", w.name.c_str(), lowest, residual.size()));
  }
  return o;
}

Outcome c6_graph_trend() {
  Outcome o;
  std::vector<int> counts;
  for (int n = 100; n <= 800; n += 100) counts.push_back(n);
  for (WorldKind kind : {WorldKind::SixRooms, WorldKind::MultiBranchMine}) {
    const World w = generate_world(kind);
    const EmbodimentSpec spec;
    const KernelParams kp;
    const SamplingStrategy sampling;
    auto rows = run_graph_bench(w, spec, kp, sampling, GraphBuilder::Basic, counts, 20, 6);
    const auto batch = run_graph_bench(w, spec, kp, sampling, GraphBuilder::Batch, counts, 20, 6);
    rows.insert(rows.end(), batch.begin(), batch.end());
    int worse = 0;
    std::string series;
    for (const auto& p : graph_trend(rows)) {
      const bool ok = p.batch_regions >= p.basic_regions;
      worse += ok ? 0 : 1;
      series += format(" %d:%.1f/%.1f", p.samples, p.basic_regions, p.batch_regions);
    }
    o.require(worse == 0, format("%s: batch below basic at %d of %zu matched times", w.name.c_str(), worse, counts.size()));
    o.note(format("%s basic/batch regions at basic time:%s", w.name.c_str(), series.c_str()));
  }
  return o;
}

Outcome c7_camera() {
  Outcome o;
  const World w = generate_world(WorldKind::TankCompartments);
  const MissionConfig cfg = tank_inspection_config(w);
  const auto rows = run_camera_bench(w, cfg, 5, 7);
  double mean[2] = {0, 0};
  for (const auto& r : rows) mean[r.active] += r.coverage / 5.0;
  o.require(mean[1] - mean[0] >= 0.10, format("gap %.1f points", 100.0 * (mean[1] - mean[0])));
  o.note(format("passive %.1f%%, active %.1f%%", 100.0 * mean[0], 100.0 * mean[1]));

  MissionConfig replay = cfg;
  replay.camera.pitch_actuated = true;
  remember("vi tank active", w, replay, splitmix64(7), run_mission(w, replay, splitmix64(7)));

  // Per-position dominance over the orientation sets.
  const VoxelMap truth = rasterize(w, cfg.voxel_resolution);
  OracleOptions oo;
  oo.grid_step = 0.8;
  oo.reachable_from = w.start;
  const auto targets = occupied_in_region(truth, *cfg.inspection_region);
  CameraSensorModel passive = cfg.camera, active = cfg.camera;
  passive.pitch_actuated = false;
  active.pitch_actuated = true;
  std::size_t positions = 0, violations = 0, strict = 0;
  for (const Vec3& p : oracle_positions(w, truth, cfg.embodiment, oo)) {
    if (!cfg.inspection_region->contains(p)) continue;
    ++positions;
    std::vector<VoxelKey> near;
    for (const auto& k : truth.occupied_in_shell(p, cfg.camera.min_range, cfg.camera.max_range))
      if (std::binary_search(targets.begin(), targets.end(), k)) near.push_back(k);
    const auto seen = [&](const CameraSensorModel& cam) {
      std::set<VoxelKey> s;
      const auto shell = line_of_sight_targets(truth, p, cam, near);
      for (const auto& v : orientation_set(truth, p, cam, shell)) s.insert(v.visible.begin(), v.visible.end());
      return s;
    };
    const auto a = seen(active), b = seen(passive);
    violations += std::includes(a.begin(), a.end(), b.begin(), b.end()) ? 0 : 1;
    strict += a.size() > b.size();
  }
  o.require(positions > 0, "no inspection positions");
  o.require(violations == 0, format("%zu positions where passive sees more", violations));
  o.note(format("dominance at %zu positions (%zu strict)", positions, strict));
  return o;
}

Outcome c8_target_reach() {
  Outcome o;
  for (WorldKind kind : {WorldKind::TrDirect, WorldKind::TrDetour, WorldKind::TrWalled}) {
    const World w = generate_world(kind);
    MissionConfig cfg;
    cfg.behavior = Behavior::TR;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const MissionResult r = run_mission(w, cfg, seed);
      const double dist = (r.state.robot.p - *w.target).norm();
      const auto switches = std::count_if(r.state.events.begin(), r.state.events.end(),
                                          [](const MissionEvent& e) { return e.tag == "frontier_switch"; });
      const std::string tag = format("%s seed %lu", w.name.c_str(), seed);
      if (kind == WorldKind::TrWalled) {
        o.require(r.status == MissionStatus::Unreachable, tag + " ended " + to_string(r.status));
      } else {
        o.require(r.status == MissionStatus::Reached && dist <= cfg.target.reach_radius,
                  format("%s ended %s at %.2f m", tag.c_str(), to_string(r.status), dist));
      }
      if (kind == WorldKind::TrDetour) o.require(switches > 0, tag + " logged no frontier switch");
      if (seed == 1) {
        remember("tr " + w.name, w, cfg, seed, r);
        o.note(format("%s: %s, %ld switches", w.name.c_str(), to_string(r.status), static_cast<long>(switches)));
      }
    }
  }
  return o;
}

Outcome c9_embodiment(const std::vector<MissionResult>& aerial) {
  Outcome o;
  std::size_t checked = 0;
  const auto revalidate = [&](const MissionResult& r, const EmbodimentSpec& spec, const std::string& tag) {
    const MapView maps(r.state.map, r.state.elevation ? &*r.state.elevation : nullptr);
    const PlanGraph& g = r.state.global_graph;
    std::size_t bad = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      const Configuration& xi = g.vertex(v).xi;
      const auto check = validate_vertex(spec, maps, xi);
      bool ok = check.ok();
      if (spec.kind == EmbodimentKind::Underwater) ok = ok && r.state.map.sdf_at(xi.p) <= *spec.max_proximity;
      bad += ok ? 0 : 1;
    }
    if (spec.kind == EmbodimentKind::Ground)
      for (const Edge& e : g.edges())
        bad += slope_ok_between(*r.state.elevation, g.position(e.a).head<2>(), g.position(e.b).head<2>(),
                                spec.max_slope, r.state.elevation->resolution())
                   ? 0
                   : 1;
    checked += g.vertex_count();
    o.require(r.status != MissionStatus::Failed, tag + " failed: " + r.message);
    o.require(g.vertex_count() > 0, tag + " has an empty global graph");
    o.require(bad == 0, format("%s: %zu violations", tag.c_str(), bad));
  };
  for (const auto& r : aerial) revalidate(r, EmbodimentSpec{}, "aerial");

  struct Case {
    WorldKind world;
    EmbodimentSpec spec;
  };
  const std::vector<Case> cases = {
      {WorldKind::TankCompartments, EmbodimentSpec::underwater(Vec3(0.6, 0.6, 0.4), 2.0)},
      {WorldKind::MultiBranchMine, EmbodimentSpec::ground(Vec3(0.6, 0.4, 0.5), 0.5, deg2rad(30.0))},
      {WorldKind::RampTerrain, EmbodimentSpec::ground(Vec3(0.6, 0.4, 0.5), 0.5, deg2rad(30.0))},
  };
  for (const auto& c : cases) {
    const World w = generate_world(c.world);
    MissionConfig cfg;
    cfg.embodiment = c.spec;
    const MissionResult r = run_mission(w, cfg, 1);
    revalidate(r, c.spec, std::string(to_string(c.spec.kind)) + " " + w.name);
    o.require(r.state.replay_violations == 0, w.name + " replayed inadmissible segments");
    remember(std::string("ve ") + to_string(c.spec.kind) + " " + w.name, w, cfg, 1, r);
  }
  o.note(format("%zu vertices re-validated over %zu missions", checked, aerial.size() + cases.size()));
  return o;
}

Outcome c10_homing() {
  Outcome o;
  MissionBudget b;
  b.endurance = 600.0;
  b.v_nom = 1.0;
  b.t = 500.0;
  const double eps = 1e-9;
  o.require(check_homing(b, 100.0), "len/v_nom = T_thr - t does not trigger");
  o.require(check_homing(b, 100.0 + eps), "just above the boundary does not trigger");
  o.require(!check_homing(b, 100.0 - eps), "just below the boundary triggers");
  b.v_nom = 2.0;
  o.require(check_homing(b, 200.0) && !check_homing(b, 200.0 - eps), "boundary at v_nom = 2");

  const World w = generate_world(WorldKind::SixRooms);
  MissionConfig cfg;
  cfg.budget.endurance = 60.0;
  const MissionResult r = run_mission(w, cfg, 3);
  const bool homed = std::any_of(r.state.events.begin(), r.state.events.end(),
                                 [](const MissionEvent& e) { return e.tag == "home"; });
  o.require(r.status == MissionStatus::Done, std::string("budget mission ended ") + to_string(r.status));
  o.require(homed, "no homing event");
  if (r.state.home != kNoVertex) {
    const double off = (r.state.robot.p - r.state.global_graph.position(r.state.home)).norm();
    o.require(off <= cfg.voxel_resolution, format("ended %.3f m from home", off));
    o.note(format("T_thr 60 s: homed, ended %.3f m from home at t=%.1f s", off, r.state.t));
  } else {
    o.require(false, "no home vertex");
  }
  remember("ve budget six_rooms", w, cfg, 3, r);
  return o;
}

Outcome c11_formulas() {
  Outcome o;
  MissionBudget b;
  b.endurance = 600.0;
  b.v_nom = 1.0;
  const double t = remaining_time(b, 50.0, 100.0);
  o.require(std::abs(t - 450.0) < 1e-9, format("T = %.9f", t));
  const double lb = balancing_factor(30.0, 60.0);
  o.require(std::abs(lb - 5.0 / 3.0) < 1e-12, format("lambda_bal = %.12f", lb));
  const double cost = frontier_cost(30.0, 60.0);
  o.require(std::abs(cost - 130.0) < 1e-9, format("cost = %.9f", cost));
  GainParams gp;
  gp.mu_l = 0.01;
  gp.mu_d = 0.0;
  const std::vector<Configuration> path{Configuration(Vec3::Zero()), Configuration(Vec3(5, 0, 0))};
  const double j = local_exploration_objective(path, {0.0, 100.0}, {0.0, 5.0}, std::nullopt, gp);
  o.require(std::abs(j - 100.0 * std::exp(-0.05)) < 1e-6, format("J = %.9f", j));
  o.require(std::round(j * 1e4) / 1e4 == 95.1229, format("J rounds to %.4f", j));
  o.note(format("T=%.1f lambda_bal=%.6f cost=%.1f J=%.6f", t, lb, cost, j));
  return o;
}

Outcome c12_determinism() {
  Outcome o;
  for (const auto& r : replays) {
    const std::string again = csv_of(run_mission(*r.world, r.config, r.seed));
    o.require(again == r.csv, r.label + " differs");
  }
  o.require(!replays.empty(), "no missions recorded");
  o.note(format("%zu missions re-run", replays.size()));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> expect_fail, only;
  app.add_option("--expect-fail", expect_fail, "Criteria with a known, documented deviation")->delimiter(',');
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  replay_worlds.reserve(64);
  std::vector<MissionResult> aerial;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"SDF equals brute-force distance transform", c1_sdf},
      {"Dijkstra equals exhaustive path enumeration", c2_shortest_paths},
      {"TSP within 5% of optimum, unit square = 3", c3_tsp},
      {"greedy coverage >= (1-1/e) optimum", c4_greedy},
      {"VE completion on t_corridor and six_rooms", [&] { return c5_ve_completion(aerial); }},
      {"Batch regions >= Basic at Basic's construction time", c6_graph_trend},
      {"active camera beats passive by >= 10 points, dominance", c7_camera},
      {"target-reach direct / detour / walled", c8_target_reach},
      {"embodiment constraints hold after missions", [&] { return c9_embodiment(aerial); }},
      {"homing boundary and budget-limited return", c10_homing},
      {"formula spot checks", c11_formulas},
      {"identical seeds give identical metrics", c12_determinism},
  };
  const double budgets[] = {10, 5, 30, 60, 600, 600, 300, 180, 60, 60, 1, 600};

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    out.require(secs <= budgets[i], format("took %.1f s, budget %.0f s", secs, budgets[i]));
    const bool expected = std::find(expect_fail.begin(), expect_fail.end(), id) != expect_fail.end();
    const char* verdict = out.pass ? "PASS" : expected ? "FAIL (known deviation)" : "FAIL";
    std::printf("criterion %2d: %s - %s [%.1f s] %s\n", id, verdict, criteria[i].first, secs, out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass && !expected) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
