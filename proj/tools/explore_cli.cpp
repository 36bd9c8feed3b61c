#include "explore/eval.hpp"
#include "explore/trace_io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace explore;

namespace {

// Everything a run depends on. Saved next to the outputs as config.json so the
// same run can be repeated with `explore-sim rerun`.
struct RunConfig {
  std::string command;
  std::string world;
  std::string worlds;
  std::vector<std::string> policies;
  int steps = 1000;
  std::vector<double> etas{0.0};
  bool door_mismatch = false;
  std::uint64_t seed = 0;
  int replicates = 3;
  int starts = 5;
  int n = 20;
  double area = 328.0;
  int goals = 50;
  std::string from_traces;
};

json to_json(const RunConfig& c) {
  return json{{"command", c.command},       {"world", c.world},
              {"worlds", c.worlds},         {"policies", c.policies},
              {"steps", c.steps},           {"etas", c.etas},
              {"door_mismatch", c.door_mismatch}, {"seed", c.seed},
              {"replicates", c.replicates}, {"starts", c.starts},
              {"n", c.n},                   {"area", c.area},
              {"goals", c.goals},           {"from_traces", c.from_traces}};
}

RunConfig from_json(const json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  c.world = j.value("world", "");
  c.worlds = j.value("worlds", "");
  c.policies = j.value("policies", std::vector<std::string>{});
  c.steps = j.value("steps", c.steps);
  c.etas = j.value("etas", c.etas);
  c.door_mismatch = j.value("door_mismatch", false);
  c.seed = j.value("seed", std::uint64_t{0});
  c.replicates = j.value("replicates", c.replicates);
  c.starts = j.value("starts", c.starts);
  c.n = j.value("n", c.n);
  c.area = j.value("area", c.area);
  c.goals = j.value("goals", c.goals);
  c.from_traces = j.value("from_traces", "");
  return c;
}

struct IoError : ExploreError {
  using ExploreError::ExploreError;
  const char* kind() const noexcept override { return "IoError"; }
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void save_config(const RunConfig& c, const fs::path& out) {
  write_file_atomic(out / "config.json", to_json(c).dump(2) + "\n");
}

std::vector<Floorplan> load_worlds(const std::string& dir) {
  if (dir.empty()) throw ConfigError("--worlds is required");
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".world") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("no .world files in " + dir);
  std::vector<Floorplan> worlds;
  for (const auto& f : files) worlds.push_back(load_floorplan(f));
  return worlds;
}

std::string mode_name(bool door_mismatch) { return door_mismatch ? "door-mismatch" : "matched"; }

// gen-worlds -------------------------------------------------------------------

void gen_worlds(const RunConfig& c, const fs::path& out) {
  if (c.n < 1) throw ConfigError("--n must be positive");
  ensure_dir(out);
  GenParams gp;
  gp.target_area = c.area;
  std::string manifest = "name,seed,area_m2\n";
  for (int i = 0; i < c.n; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "world_%03d", i);
    const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(i);
    const Floorplan plan = generate_house(seed, gp, name);
    write_file_atomic(out / (std::string(name) + ".world"), format_floorplan(plan));
    manifest += std::string(name) + ',' + std::to_string(seed) + ',' +
                format_number(traversable_area(plan)) + '\n';
  }
  write_file_atomic(out / "manifest.csv", manifest);
  std::cout << "wrote " << c.n << " worlds to " << out.string() << "\n";
}

// explore ------------------------------------------------------------------------

void explore_one(const RunConfig& c, const fs::path& out) {
  if (c.world.empty()) throw ConfigError("--world is required");
  if (c.etas.size() != 1) throw ConfigError("explore takes a single --eta");
  const Floorplan plan = load_floorplan(c.world);
  ensure_dir(out / "snapshots");
  EpisodeConfig ec;
  ec.policy = c.policies.empty() ? "frontier" : c.policies.front();
  ec.eta = c.etas.front();
  ec.seed = c.seed;
  ec.steps = c.steps;
  ec.mode.door_mismatch = c.door_mismatch;
  const EpisodeResult r = run_episode(plan, ec, [&](const TraceStep& s, const OccupancyGrid& map) {
    if (s.t % 100 != 0) return;
    char name[32];
    std::snprintf(name, sizeof(name), "map_%05d.pgm", s.t);
    std::ostringstream pgm;
    write_pgm(map, pgm);
    write_file_atomic(out / "snapshots" / name, pgm.str());
  });
  write_trace(r.trace, out / "trace.jsonl");
  const double final_cov = r.trace.steps.empty() ? r.trace.header.initial_true_coverage
                                                 : r.trace.steps.back().true_coverage;
  std::cout << json{{"trace", (out / "trace.jsonl").string()},
                    {"steps", r.trace.steps.size()},
                    {"true_coverage_m2", final_cov}}
                   .dump()
            << "\n";
}

// eval-coverage ------------------------------------------------------------------

std::vector<EpisodeTrace> read_trace_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw EmptyInputError("no traces in " + dir.string());
  std::vector<EpisodeTrace> traces;
  for (const auto& f : files) traces.push_back(read_trace(f));
  return traces;
}

void write_curves(std::span<const EpisodeTrace> traces, const fs::path& out) {
  const auto rows = aggregate_coverage(traces);
  write_file_atomic(out / "curves.csv", format_curves_csv(rows));
  json finals = json::array();
  for (const CurveRow& r : rows) {
    const bool last = &r == &rows.back() || (&r + 1)->t == 1;
    if (last)
      finals.push_back({{"policy", r.policy}, {"eta", r.eta}, {"mode", mode_name(r.door_mismatch)},
                        {"t", r.t}, {"mean", r.mean}, {"min", r.min}, {"max", r.max}});
  }
  write_file_atomic(out / "summary.json", json{{"final_coverage_m2", finals}}.dump(2) + "\n");
}

void eval_coverage(const RunConfig& c, int jobs, const fs::path& out) {
  ensure_dir(out);
  if (!c.from_traces.empty()) {
    write_curves(read_trace_dir(c.from_traces), out);
    std::cout << "re-aggregated " << c.from_traces << "\n";
    return;
  }
  const std::vector<Floorplan> worlds = load_worlds(c.worlds);
  CoverageExperimentConfig ec;
  ec.policies = c.policies.empty() ? std::vector<std::string>{"random", "straight", "frontier"}
                                   : c.policies;
  ec.etas = c.etas;
  ec.mode.door_mismatch = c.door_mismatch;
  ec.starts_per_world = c.starts;
  ec.replicates = c.replicates;
  ec.steps = c.steps;
  ec.master_seed = c.seed;
  ec.jobs = jobs;
  const auto traces = run_coverage_experiment(worlds, ec);

  ensure_dir(out / "traces");
  // The index prefix keeps directory order equal to experiment order, which
  // re-aggregation relies on.
  parallel_for(traces.size(), jobs, [&](std::size_t i) {
    const TraceHeader& h = traces[i].header;
    char name[160];
    std::snprintf(name, sizeof(name), "%05zu_%s_eta%s_%s_r%d_w%d_s%d.jsonl", i, h.policy.c_str(),
                  format_number(h.eta).c_str(), mode_name(h.door_mismatch).c_str(), h.replicate,
                  h.world_index, h.start_index);
    write_trace(traces[i], out / "traces" / name);
  });
  write_curves(traces, out);
  std::cout << "ran " << traces.size() << " episodes; curves in " << (out / "curves.csv").string()
            << "\n";
}

// eval-downstream -------------------------------------------------------------------

void eval_downstream(const RunConfig& c, int jobs, const fs::path& out) {
  ensure_dir(out);
  const std::vector<Floorplan> worlds = load_worlds(c.worlds);
  const std::string policy = c.policies.empty() ? "frontier" : c.policies.front();
  const WorldMode mode{c.door_mismatch};
  const std::vector<double> thresholds{0.25, 0.5, 1.0, 2.0, 3.0, 5.0};

  struct WorldResult {
    std::vector<SplRecord> with, none;
    LocalizationErrors loc;
  };
  std::vector<WorldResult> results(worlds.size());
  parallel_for(worlds.size(), jobs, [&](std::size_t w) {
    const Floorplan& plan = worlds[w];
    const ExperienceLog log =
        collect_experience(plan, mode, policy, c.steps, derive_seed(c.seed, 0x10c, w));
    const auto trials = sample_navigation_trials(plan, c.goals, derive_seed(c.seed, 0x6a1, w));
    std::vector<Pose> goals;
    for (const auto& t : trials) goals.push_back(t.goal);
    results[w] = {downstream_navigation(plan, mode, &log, trials),
                  downstream_navigation(plan, mode, nullptr, trials),
                  localization_errors(plan, mode, log, goals, 5)};
  });

  json per_world = json::array();
  std::vector<SplRecord> all_with, all_none;
  std::vector<double> top1, top5;
  for (std::size_t w = 0; w < worlds.size(); ++w) {
    const WorldResult& r = results[w];
    per_world.push_back({{"world", worlds[w].name()},
                         {"spl_with_exploration", spl(r.with)},
                         {"spl_no_exploration", spl(r.none)}});
    all_with.insert(all_with.end(), r.with.begin(), r.with.end());
    all_none.insert(all_none.end(), r.none.begin(), r.none.end());
    top1.insert(top1.end(), r.loc.top1.begin(), r.loc.top1.end());
    top5.insert(top5.end(), r.loc.topk.begin(), r.loc.topk.end());
  }
  const json summary{{"exploration_policy", policy},
                     {"exploration_steps", c.steps},
                     {"mode", mode_name(c.door_mismatch)},
                     {"trials", all_with.size()},
                     {"spl_with_exploration", spl(all_with)},
                     {"spl_no_exploration", spl(all_none)},
                     {"localization",
                      {{"thresholds_m", thresholds},
                       {"top1_success", success_curve(top1, thresholds)},
                       {"top5_success", success_curve(top5, thresholds)}}},
                     {"per_world", per_world}};
  write_file_atomic(out / "summary.json", summary.dump(2) + "\n");
  std::cout << json{{"spl_with_exploration", summary["spl_with_exploration"]},
                    {"spl_no_exploration", summary["spl_no_exploration"]}}
                   .dump()
            << "\n";
}

void dispatch(const RunConfig& c, int jobs, const fs::path& out) {
  if (out.empty()) throw ConfigError("--out is required");
  if (c.command == "gen-worlds") gen_worlds(c, out);
  else if (c.command == "explore") explore_one(c, out);
  else if (c.command == "eval-coverage") eval_coverage(c, jobs, out);
  else if (c.command == "eval-downstream") eval_downstream(c, jobs, out);
  else throw ConfigError("unknown command '" + c.command + "'");
  save_config(c, out);
}

int report_error(const std::string& command, const std::string& kind, const std::string& message,
                 const fs::path& out) {
  const json record{{"status", "error"}, {"command", command}, {"error", kind},
                    {"message", message}};
  std::cerr << record.dump() << "\n";
  std::error_code ec;
  if (!out.empty() && (fs::create_directories(out, ec), fs::is_directory(out))) {
    std::ofstream f(out / "error.json", std::ios::trunc);
    f << record.dump(2) << "\n";
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic 2D exploration simulator and evaluation harness"};
  app.require_subcommand(1);

  RunConfig cfg;
  int jobs = 1;
  std::string out;
  std::string config_path;

  auto shared = [&](CLI::App* sub) {
    sub->add_option("--out", out, "Output directory")->required();
    sub->add_option("--seed", cfg.seed, "Seed fixing every random choice");
  };
  auto episode_flags = [&](CLI::App* sub) {
    sub->add_option("--steps", cfg.steps, "Steps per episode");
    sub->add_option("--eta", cfg.etas, "Odometry noise level(s)")->delimiter(',');
    sub->add_flag("--door-mismatch", cfg.door_mismatch, "Render doors as walls");
  };

  CLI::App* gen = app.add_subcommand("gen-worlds", "Generate floorplans and a manifest");
  shared(gen);
  gen->add_option("--n", cfg.n, "Number of worlds");
  gen->add_option("--area", cfg.area, "Target traversable area (m^2)");

  CLI::App* exp = app.add_subcommand("explore", "Run one episode; write trace and snapshots");
  shared(exp);
  episode_flags(exp);
  exp->add_option("--world", cfg.world, "Floorplan file")->required();
  exp->add_option("--policy", cfg.policies, "Policy name")->expected(1);

  CLI::App* cov = app.add_subcommand("eval-coverage", "Coverage experiment grid");
  shared(cov);
  episode_flags(cov);
  cov->add_option("--worlds", cfg.worlds, "Directory of .world files");
  cov->add_option("--policy", cfg.policies, "Policies")->delimiter(',');
  cov->add_option("--replicates", cfg.replicates, "Seed replicates");
  cov->add_option("--starts", cfg.starts, "Start poses per world");
  cov->add_option("--jobs", jobs, "Parallel episodes");
  cov->add_option("--from-traces", cfg.from_traces, "Re-aggregate saved traces instead of running");

  CLI::App* down = app.add_subcommand("eval-downstream", "Localization and SPL experiment");
  shared(down);
  down->add_option("--worlds", cfg.worlds, "Directory of .world files")->required();
  down->add_option("--policy", cfg.policies, "Exploration policy")->expected(1);
  down->add_option("--steps", cfg.steps, "Exploration steps")->default_str("1500");
  down->add_option("--goals", cfg.goals, "Navigation trials per world");
  down->add_flag("--door-mismatch", cfg.door_mismatch, "Render doors as walls");
  down->add_option("--jobs", jobs, "Parallel worlds");

  CLI::App* rerun = app.add_subcommand("rerun", "Repeat a run from its saved config.json");
  rerun->add_option("--config", config_path, "Saved config.json")->required();
  rerun->add_option("--out", out, "Output directory")->required();
  rerun->add_option("--jobs", jobs, "Parallelism");

  // Default exploration length for the downstream task differs from episodes.
  down->preparse_callback([&](std::size_t) { cfg.steps = 1500; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report_error("", "UsageError", e.what(), {});
  }

  std::string command;
  try {
    if (rerun->parsed()) {
      std::ifstream f(config_path);
      if (!f) throw IoError("cannot open " + config_path);
      json j;
      try {
        j = json::parse(f);
      } catch (const json::exception& e) {
        throw ParseError(std::string("bad config: ") + e.what());
      }
      cfg = from_json(j);
    } else {
      cfg.command = app.get_subcommands().front()->get_name();
    }
    command = cfg.command;
    if (jobs < 1) throw ConfigError("--jobs must be >= 1");
    dispatch(cfg, jobs, out);
  } catch (const ExploreError& e) {
    return report_error(command, e.kind(), e.what(), out);
  } catch (const std::exception& e) {
    return report_error(command, "InternalError", e.what(), out);
  }
  return 0;
}
