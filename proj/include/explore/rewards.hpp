#pragma once

#include "explore/mapping.hpp"

#include <cstdint>

namespace explore {

struct RewardConfig {
  double alpha = 0.0005;  ///< per newly known map cell
  double beta = 0.006;    ///< per bump
};

struct StepReward {
  std::int64_t cov_term = 0;  ///< newly known cells
  int coll_term = 0;          ///< -1 on bump, else 0
  double total = 0.0;
};

/// Reward from known-cell counts before and after one integrate.
/// Throws NegativeCoverageError if coverage shrank (maps passed out of order).
StepReward step_reward(std::size_t prev_known_cells, std::size_t next_known_cells, bool bump,
                       const RewardConfig& cfg = {});

inline StepReward step_reward(const OccupancyGrid& prev_map, const OccupancyGrid& next_map,
                              bool bump, const RewardConfig& cfg = {}) {
  return step_reward(prev_map.known_cells(), next_map.known_cells(), bump, cfg);
}

}  // namespace explore
