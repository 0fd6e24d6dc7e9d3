#include "gplan/cli/run_config.hpp"
#include "gplan/worldsim/bench.hpp"
#include "gplan/worldsim/oracles.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

using namespace gplan;
namespace fs = std::filesystem;

namespace {

// Runs task(i) for i in [0, n) on `jobs` threads. Each task writes only its own slot.
template <class Fn>
void parallel_for(int n, int jobs, Fn&& task) {
  jobs = std::max(1, std::min(jobs, n));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (int i; (i = next++) < n;) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  int jobs = 1;
  std::string out;
  std::string world;
};

void add_common(CLI::App* cmd, Common& c, bool with_world = true) {
  cmd->add_option("--config", c.config, "INI run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--set", c.sets, "Override a config key: section.key=value (repeatable)");
  cmd->add_option("--seed", c.seed, "Base seed");
  cmd->add_option("--trials", c.trials, "Number of trials")->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Output directory");
  if (with_world) cmd->add_option("--world", c.world, "World kind, or a world file path");
}

RunConfig resolve(const Common& c) {
  std::vector<std::string> sets = c.sets;
  if (!c.world.empty()) {
    if (fs::exists(c.world)) {
      sets.push_back("world.kind=");
      sets.push_back("world.file=" + c.world);
    } else {
      sets.push_back("world.file=");
      sets.push_back("world.kind=" + c.world);
    }
  }
  RunConfig cfg = c.config.empty() ? default_run_config(sets) : load_run_config(c.config, sets);
  if (c.seed) cfg.seed = *c.seed;
  if (c.trials) cfg.trials = *c.trials;
  if (!c.out.empty()) cfg.out_dir = c.out;
  return cfg;
}

int cmd_run(const Common& c) {
  const RunConfig cfg = resolve(c);
  const World world = load_world(cfg.world);
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);
  std::vector<MissionResult> results(cfg.trials, MissionResult{MissionStatus::Failed, "", SimState(VoxelMap(Vec3::Zero(), Vec3i(1, 1, 1), 1.0)), {}});
  parallel_for(cfg.trials, c.jobs, [&](int trial) {
    results[trial] = run_mission(world, cfg.mission, cfg.seed + static_cast<std::uint64_t>(trial));
    const MissionResult& r = results[trial];
    auto csv = open_out(out / ("metrics_" + std::to_string(trial) + ".csv"));
    write_metrics_csv(csv, r.metrics);
    for (const auto& [iter, g] : r.state.graph_snapshots) {
      auto gs = open_out(out / ("graph_" + std::to_string(trial) + "_" + std::to_string(iter) + ".txt"));
      write_plan_graph(gs, g);
    }
  });

  nlohmann::ordered_json summary;
  summary["world"] = world.name;
  summary["behavior"] = to_string(cfg.mission.behavior);
  summary["seed"] = cfg.seed;
  auto& trials = summary["trials"] = nlohmann::ordered_json::array();
  bool failed = false;
  for (int t = 0; t < cfg.trials; ++t) {
    const MissionResult& r = results[t];
    failed = failed || r.status == MissionStatus::Failed;
    nlohmann::ordered_json j;
    j["trial"] = t;
    j["seed"] = cfg.seed + static_cast<std::uint64_t>(t);
    j["status"] = to_string(r.status);
    j["message"] = r.message;
    j["auc_m3s"] = r.metrics.auc;
    j["duration_s"] = r.metrics.duration;
    j["path_length_m"] = r.metrics.path_length;
    j["iterations"] = r.state.iterations;
    j["explored_m3"] = r.metrics.samples.empty() ? 0.0 : r.metrics.samples.back().explored_m3;
    if (cfg.mission.behavior == Behavior::VI || cfg.mission.behavior == Behavior::VEThenVI) j["coverage"] = r.metrics.coverage;
    trials.push_back(j);
    std::printf("trial %d: %s t=%.1fs path=%.1fm%s%s\n", t, to_string(r.status), r.metrics.duration,
                r.metrics.path_length, r.message.empty() ? "" : " ", r.message.c_str());
  }
  auto js = open_out(out / "summary.json");
  js << summary.dump(2) << "\n";
  return failed ? 2 : 0;
}

std::vector<GraphBuilder> builders_for(const std::string& strategy) {
  if (strategy == "both") return {GraphBuilder::Basic, GraphBuilder::Batch};
  return {parse_graph_builder(strategy)};
}

int cmd_bench_graph(Common c, const std::string& strategy, const std::vector<int>& counts) {
  if (c.world.empty()) c.world = "six_rooms";
  if (!c.trials) c.trials = 20;
  const RunConfig cfg = resolve(c);
  const World world = load_world(cfg.world);
  const fs::path out(cfg.out_dir);
  const auto builders = builders_for(strategy);
  // One task per (builder, count); trials inside a task share a thread.
  const int tasks = static_cast<int>(builders.size() * counts.size());
  std::vector<std::vector<GraphBenchRow>> parts(tasks);
  parallel_for(tasks, c.jobs, [&](int i) {
    const GraphBuilder b = builders[i / counts.size()];
    parts[i] = run_graph_bench(world, cfg.mission.embodiment, cfg.mission.exploration.kernel,
                               cfg.mission.exploration.sampling, b, {counts[i % counts.size()]}, cfg.trials, cfg.seed,
                               cfg.mission.voxel_resolution);
  });
  std::vector<GraphBenchRow> rows;
  for (auto& p : parts) rows.insert(rows.end(), p.begin(), p.end());

  auto csv = open_out(out / "bench_graph.csv");
  csv << "strategy,samples,trial,seconds,vertices,edges,regions\n";
  for (const auto& r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%.6f,%zu,%zu,%zu\n", to_string(r.builder), r.samples, r.trial, r.seconds,
                  r.vertices, r.edges, r.regions);
    csv << buf;
  }
  auto sum = open_out(out / "bench_graph_summary.csv");
  sum << "strategy,samples,median_seconds,median_regions\n";
  for (GraphBuilder b : builders)
    for (int n : counts) {
      std::vector<double> secs, regs;
      for (const auto& r : rows)
        if (r.builder == b && r.samples == n) {
          secs.push_back(r.seconds);
          regs.push_back(static_cast<double>(r.regions));
        }
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s,%d,%.6f,%.1f\n", to_string(b), n, median(secs), median(regs));
      sum << buf;
      std::fputs(buf, stdout);
    }
  if (builders.size() == 2) {
    std::printf("basic_samples,basic_median_s,basic_regions,batch_samples,batch_regions\n");
    for (const auto& p : graph_trend(rows))
      std::printf("%d,%.6f,%.1f,%d,%.1f\n", p.samples, p.basic_seconds, p.basic_regions, p.batch_samples, p.batch_regions);
  }
  return 0;
}

int cmd_bench_camera(Common c, const std::string& strategy) {
  if (c.world.empty()) c.world = "tank_compartments";
  if (!c.trials) c.trials = 5;
  RunConfig cfg = resolve(c);
  const World world = load_world(cfg.world);
  MissionConfig mission = cfg.mission;
  if (c.config.empty()) {
    mission = tank_inspection_config(world);
  } else if (!mission.inspection_region) {
    mission.inspection_region = tank_inspection_config(world).inspection_region;
  }
  const auto rows = run_camera_bench(world, mission, cfg.trials, cfg.seed);
  auto csv = open_out(fs::path(cfg.out_dir) / "bench_camera.csv");
  csv << "strategy,trial,coverage,targets,residual,inspected,path_length_m\n";
  for (bool active : {false, true}) {
    const char* name = active ? "active" : "passive";
    if (strategy != "both" && strategy != name) continue;
    double sum = 0.0, sq = 0.0;
    int n = 0;
    for (const auto& r : rows) {
      if (r.active != active) continue;
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s,%d,%.6f,%zu,%zu,%zu,%.6f\n", name, r.trial, r.coverage, r.targets, r.residual,
                    r.inspected, r.path_length);
      csv << buf;
      sum += r.coverage;
      sq += r.coverage * r.coverage;
      ++n;
    }
    const double mean = sum / n;
    const double sd = n > 1 ? std::sqrt(std::max(0.0, (sq - n * mean * mean) / (n - 1))) : 0.0;
    std::printf("%s coverage %.2f%% +- %.2f%% over %d trials\n", name, 100.0 * mean, 100.0 * sd, n);
  }
  return 0;
}

int cmd_oracle(Common c, const std::string& kind, const std::string& file, std::size_t limit) {
  const RunConfig cfg = resolve(c);
  const World world = load_world(cfg.world);
  OracleOptions o;
  o.resolution = cfg.mission.voxel_resolution;
  o.voxel_limit = limit;
  if (world.start) o.reachable_from = *world.start;
  if (cfg.mission.inspection_region) o.surface_region = cfg.mission.inspection_region;
  const auto keys = kind == "residual_volume"
                        ? residual_volume_oracle(world, cfg.mission.embodiment, cfg.mission.depth, o)
                        : residual_surface_oracle(world, cfg.mission.embodiment, cfg.mission.camera, o);
  auto os = open_out(file.empty() ? fs::path(cfg.out_dir) / (kind + ".txt") : fs::path(file));
  for (const auto& k : keys) os << k.i << ' ' << k.j << ' ' << k.k << '\n';
  std::printf("%zu residual voxels\n", keys.size());
  return 0;
}

int cmd_world_gen(const std::string& kind, const std::vector<std::string>& params, std::uint64_t seed,
                  const std::string& file) {
  WorldSource src;
  src.kind = kind;
  src.seed = seed;
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw ConfigError("--param", 0, "expected key=value, got '" + p + "'");
    std::size_t used = 0;
    const std::string value = p.substr(eq + 1);
    const double v = std::stod(value, &used);
    if (used != value.size()) throw ConfigError("--param", 0, "expected a number in '" + p + "'");
    src.params[p.substr(0, eq)] = v;
  }
  const World w = load_world(src);
  if (file.empty()) {
    write_world(std::cout, w);
  } else {
    auto os = open_out(file);
    write_world(os, w);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based planning kernel: missions, benchmarks and oracles"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run = app.add_subcommand("run", "Run missions from a config; writes metrics_<trial>.csv and summary.json");
  add_common(run, run_opts);

  Common graph_opts;
  std::string graph_strategy = "both";
  std::vector<int> counts{100, 200, 300, 400, 500, 600, 700, 800};
  auto* graph = app.add_subcommand("bench-graph", "Graph-construction benchmark (construction time, regions covered)");
  add_common(graph, graph_opts);
  graph->add_option("--strategy", graph_strategy)->check(CLI::IsMember({"basic", "batch", "both"}));
  graph->add_option("--counts", counts, "Sample counts n_V_max")->delimiter(',');

  Common cam_opts;
  std::string cam_strategy = "both";
  auto* cam = app.add_subcommand("bench-camera", "Passive vs actuated camera inspection coverage");
  add_common(cam, cam_opts);
  cam->add_option("--strategy", cam_strategy)->check(CLI::IsMember({"passive", "active", "both"}));

  Common oracle_opts;
  std::string oracle_kind, oracle_file;
  std::size_t oracle_limit = OracleOptions{}.voxel_limit;
  auto* oracle = app.add_subcommand("oracle", "Residual voxel sets (one `i j k` line per voxel)");
  add_common(oracle, oracle_opts);
  oracle->add_option("--kind", oracle_kind)->required()->check(CLI::IsMember({"residual_volume", "residual_surface"}));
  oracle->add_option("--file", oracle_file, "Output file (default <out>/<kind>.txt)");
  oracle->add_option("--limit", oracle_limit, "Voxel limit");

  std::string gen_kind, gen_file;
  std::vector<std::string> gen_params;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("world-gen", "Write a generated world to a file");
  gen->add_option("--world", gen_kind, "World kind")->required();
  gen->add_option("--param", gen_params, "Generator parameter key=value (repeatable)");
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", gen_file, "Output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (graph->parsed()) return cmd_bench_graph(graph_opts, graph_strategy, counts);
    if (cam->parsed()) return cmd_bench_camera(cam_opts, cam_strategy);
    if (oracle->parsed()) return cmd_oracle(oracle_opts, oracle_kind, oracle_file, oracle_limit);
    if (gen->parsed()) return cmd_world_gen(gen_kind, gen_params, gen_seed, gen_file);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
