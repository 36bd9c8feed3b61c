#include "explore/eval.hpp"

namespace explore {

Pose sample_start(const Floorplan& plan, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 1));
  return sample_pose(plan, kStartClearance, rng);
}

EpisodeResult run_episode(const Floorplan& plan, const EpisodeConfig& cfg, const StepHook& hook) {
  if (cfg.steps < 0) throw ConfigError("steps must be non-negative");
  if (!(cfg.eta >= 0.0)) throw ConfigError("eta must be non-negative");
  validate(cfg.sensor);

  const Pose start = cfg.start ? *cfg.start : sample_start(plan, cfg.seed);
  if (!is_traversable(plan, cfg.mode, start.position()))
    throw InvalidState("start pose is not traversable");

  auto policy = make_policy(cfg.policy, &plan);
  const NoiseConfig noise{cfg.eta, derive_seed(cfg.seed, 2)};
  Rng noise_rng(noise.rng_seed);
  Rng policy_rng(derive_seed(cfg.seed, 3));

  EpisodeResult out{{}, OccupancyGrid(plan.resolution()), OccupancyGrid(plan.resolution())};
  TraceHeader& h = out.trace.header;
  h.world = plan.name();
  h.policy = std::string(policy->name());
  h.eta = cfg.eta;
  h.seed = cfg.seed;
  h.door_mismatch = cfg.mode.door_mismatch;
  h.steps = cfg.steps;
  h.start = start;

  Pose true_pose = start;
  Pose est_pose = start;
  DepthScan scan = render_scan(plan, cfg.mode, true_pose, cfg.sensor);
  integrate(out.agent_map, est_pose, scan, cfg.sensor);
  integrate(out.true_map, true_pose, scan, cfg.sensor);
  h.initial_agent_coverage = coverage(out.agent_map);
  h.initial_true_coverage = coverage(out.true_map);

  bool bump = false;
  out.trace.steps.reserve(static_cast<std::size_t>(cfg.steps));
  for (int t = 1; t <= cfg.steps; ++t) {
    const PolicyObservation obs(scan, bump, est_pose, out.agent_map);
    const Action a = policy->act(obs, policy_rng);
    const StepOutcome o = step_agent(plan, cfg.mode, true_pose, est_pose, a, noise, noise_rng);
    true_pose = o.true_pose;
    est_pose = o.est_pose;
    bump = o.bump;

    scan = render_scan(plan, cfg.mode, true_pose, cfg.sensor);
    const std::size_t prev_known = out.agent_map.known_cells();
    integrate(out.agent_map, est_pose, scan, cfg.sensor);
    integrate(out.true_map, true_pose, scan, cfg.sensor);
    const StepReward r = step_reward(prev_known, out.agent_map.known_cells(), bump, cfg.reward);

    TraceStep row;
    row.t = t;
    row.action = a;
    row.true_pose = true_pose;
    row.est_pose = est_pose;
    row.bump = bump;
    row.reward_total = r.total;
    row.agent_coverage = coverage(out.agent_map);
    row.true_coverage = coverage(out.true_map);
    out.trace.steps.push_back(row);
    if (hook) hook(row, out.agent_map);
  }
  return out;
}

}  // namespace explore
