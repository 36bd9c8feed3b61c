#include "explore/eval.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace explore {

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<EpisodeTrace> run_coverage_experiment(std::span<const Floorplan> worlds,
                                                  const CoverageExperimentConfig& cfg) {
  if (worlds.empty()) throw ConfigError("coverage experiment needs at least one world");
  if (cfg.starts_per_world < 1 || cfg.replicates < 1) throw ConfigError("bad experiment grid");

  struct Job {
    std::size_t policy, eta;
    int replicate, world, start;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < cfg.policies.size(); ++p)
    for (std::size_t e = 0; e < cfg.etas.size(); ++e)
      for (int r = 0; r < cfg.replicates; ++r)
        for (int w = 0; w < static_cast<int>(worlds.size()); ++w)
          for (int s = 0; s < cfg.starts_per_world; ++s) jobs.push_back({p, e, r, w, s});

  // Start poses depend only on (replicate, world, start).
  std::map<std::tuple<int, int, int>, Pose> starts;
  for (int r = 0; r < cfg.replicates; ++r)
    for (int w = 0; w < static_cast<int>(worlds.size()); ++w) {
      Rng rng(derive_seed(cfg.master_seed, 0x5747, r, w));
      const auto candidates = cells_with_clearance(worlds[static_cast<std::size_t>(w)], kStartClearance);
      if (candidates.empty()) throw InvalidState("world has no valid start cell");
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      std::uniform_int_distribution<int> heading(0, 39);
      for (int s = 0; s < cfg.starts_per_world; ++s) {
        const Vec2 p = cell_center(candidates[pick(rng)], worlds[static_cast<std::size_t>(w)].resolution());
        starts[{r, w, s}] = Pose{p.x(), p.y(), 9.0 * heading(rng)};
      }
    }

  std::vector<EpisodeTrace> traces(jobs.size());
  parallel_for(jobs.size(), cfg.jobs, [&](std::size_t i) {
    const Job& j = jobs[i];
    EpisodeConfig ec;
    ec.policy = cfg.policies[j.policy];
    ec.eta = cfg.etas[j.eta];
    ec.seed = derive_seed(cfg.master_seed, 0xe915, j.replicate, j.world, j.start);
    ec.steps = cfg.steps;
    ec.mode = cfg.mode;
    ec.sensor = cfg.sensor;
    ec.start = starts.at({j.replicate, j.world, j.start});
    EpisodeTrace t = run_episode(worlds[static_cast<std::size_t>(j.world)], ec).trace;
    t.header.replicate = j.replicate;
    t.header.world_index = j.world;
    t.header.start_index = j.start;
    traces[i] = std::move(t);
  });
  return traces;
}

std::vector<CurveRow> aggregate_coverage(std::span<const EpisodeTrace> traces) {
  struct Group {
    std::string policy;
    double eta;
    bool door_mismatch;
    std::map<int, std::vector<const EpisodeTrace*>> by_replicate;
  };
  std::vector<Group> groups;
  for (const EpisodeTrace& tr : traces) {
    const auto& h = tr.header;
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.policy == h.policy && g.eta == h.eta && g.door_mismatch == h.door_mismatch;
    });
    if (it == groups.end()) {
      groups.push_back({h.policy, h.eta, h.door_mismatch, {}});
      it = std::prev(groups.end());
    }
    it->by_replicate[h.replicate].push_back(&tr);
  }

  std::vector<CurveRow> rows;
  for (const Group& g : groups) {
    std::size_t steps = std::numeric_limits<std::size_t>::max();
    for (const auto& [rep, runs] : g.by_replicate)
      for (const EpisodeTrace* tr : runs) steps = std::min(steps, tr->steps.size());
    for (std::size_t t = 0; t < steps; ++t) {
      std::vector<double> per_rep;
      for (const auto& [rep, runs] : g.by_replicate) {
        double sum = 0.0;
        for (const EpisodeTrace* tr : runs) sum += tr->steps[t].true_coverage;
        per_rep.push_back(sum / static_cast<double>(runs.size()));
      }
      CurveRow row;
      row.t = static_cast<int>(t) + 1;
      row.policy = g.policy;
      row.eta = g.eta;
      row.door_mismatch = g.door_mismatch;
      double total = 0.0;
      for (double v : per_rep) total += v;
      row.mean = total / static_cast<double>(per_rep.size());
      row.min = *std::min_element(per_rep.begin(), per_rep.end());
      row.max = *std::max_element(per_rep.begin(), per_rep.end());
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

double mean_final_coverage(std::span<const EpisodeTrace> traces, std::string_view policy,
                           double eta, bool door_mismatch) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const EpisodeTrace& tr : traces) {
    if (tr.header.policy != policy || tr.header.eta != eta ||
        tr.header.door_mismatch != door_mismatch || tr.steps.empty())
      continue;
    sum += tr.steps.back().true_coverage;
    ++n;
  }
  if (n == 0) throw EmptyInputError("no traces for the requested group");
  return sum / static_cast<double>(n);
}

double spl(std::span<const SplRecord> records) {
  if (records.empty()) throw EmptyInputError("SPL needs at least one trial");
  double sum = 0.0;
  for (const SplRecord& r : records) {
    if (!(r.shortest > 0.0)) throw InvalidState("SPL record with non-positive shortest path");
    if (r.success) sum += r.shortest / std::max(r.executed, r.shortest);
  }
  return sum / static_cast<double>(records.size());
}

}  // namespace explore
