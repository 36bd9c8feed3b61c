#include "explore/rewards.hpp"

namespace explore {

StepReward step_reward(std::size_t prev_known_cells, std::size_t next_known_cells, bool bump,
                       const RewardConfig& cfg) {
  if (!(cfg.alpha >= 0.0) || !(cfg.beta >= 0.0))
    throw ConfigError("reward weights must be non-negative");
  if (next_known_cells < prev_known_cells)
    throw NegativeCoverageError("coverage decreased between consecutive maps");
  StepReward r;
  r.cov_term = static_cast<std::int64_t>(next_known_cells - prev_known_cells);
  r.coll_term = bump ? -1 : 0;
  r.total = cfg.alpha * static_cast<double>(r.cov_term) + cfg.beta * r.coll_term;
  return r;
}

}  // namespace explore
