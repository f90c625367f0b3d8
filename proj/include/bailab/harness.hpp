#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bailab/allocate.hpp"
#include "bailab/model.hpp"

namespace bailab {

// State of one replication after T waves.
struct Snapshot {
  std::int64_t waves = 0;
  std::size_t chosen_arm = 0;
  double regret = 0.0;       // gap of the chosen arm
  SufficientStats stats;
  double share_best = 0.0;   // m[best] / (N T)
  std::int64_t degenerate_waves = 0;
};

struct ReplicationResult {
  std::size_t chosen_arm = 0;
  double regret = 0.0;
  SufficientStats final_stats;
  double share_best = 0.0;
  // Waves in which exploration shares were undefined and the wave was split
  // uniformly instead.
  std::int64_t degenerate_waves = 0;
  // One entry per requested checkpoint, in the order given.
  std::vector<Snapshot> checkpoints;
};

// One adaptive experiment of config.waves waves. Wave t draws its posterior
// samples and its outcomes from streams keyed by (seed, rep_index, t), so the
// result depends on nothing else. No rule looks at the horizon, which makes a
// checkpoint at T identical to a separate run with config.waves = T.
//
// The uniform rule apportions cumulatively (wave t gets
// counts(N t) - counts(N (t - 1))) so arms rotate when k does not divide N.
ReplicationResult run_replication(const Instance& instance, const ExperimentConfig& config,
                                  Rule rule, std::uint64_t rep_index,
                                  std::span<const std::int64_t> checkpoints = {});

struct RegretEstimate {
  std::int64_t wave_size = 0;
  std::int64_t waves = 0;
  std::int64_t reps = 0;
  double regret_hat = 0.0;
  double regret_se = 0.0;
  double err_prob_hat = 0.0;
  double exponent_point = 0.0;  // -log(regret_hat) / (N T); NaN when regret_hat == 0
  double share_best_mean = 0.0;
  double share_best_se = 0.0;
  std::vector<double> arm_share_mean;  // mean of m[d] / (N T)
  std::vector<double> choice_freq;     // fraction of replications choosing d
  std::int64_t degenerate_waves = 0;
};

// Aggregates snapshots taken at the same horizon, in the given order.
// regret_hat is sum_d gap_d * freq_d, so for k = 2 it equals
// gap * err_prob_hat exactly.
RegretEstimate summarize(const Instance& instance, std::int64_t wave_size,
                         std::span<const Snapshot> snapshots);

// Replications rep_offset .. rep_offset + reps - 1, run on `workers` threads.
RegretEstimate estimate_regret(const Instance& instance, const ExperimentConfig& config,
                               Rule rule, std::int64_t reps, std::size_t workers = 1,
                               std::uint64_t rep_offset = 0);

// One pass to max(t_grid) waves with checkpoints; row i is bit-identical to
// estimate_regret with config.waves = t_grid[i].
std::vector<RegretEstimate> estimate_regret_grid(const Instance& instance,
                                                 const ExperimentConfig& config, Rule rule,
                                                 std::span<const std::int64_t> t_grid,
                                                 std::int64_t reps, std::size_t workers = 1);

struct ExponentPoint {
  double budget = 0.0;  // N T
  double regret = 0.0;
};

struct ExponentFit {
  double exponent = 0.0;     // -slope of log(regret) on N T
  double exponent_se = 0.0;  // NaN with only two usable points
  double intercept = 0.0;
  std::size_t used = 0;
  std::vector<std::size_t> dropped;  // indices with regret <= 0
};

// Ordinary least squares of log(regret) against budget. Points with zero
// regret are dropped and listed. Throws Error{invalid_argument} when fewer
// than two points remain.
ExponentFit fit_exponent(std::span<const ExponentPoint> points);

struct ExponentStudy {
  std::vector<RegretEstimate> rows;
  ExponentFit fit;
};

// Throws Error{invalid_argument} for fewer than three grid points.
ExponentStudy estimate_exponent(const Instance& instance, const ExperimentConfig& config,
                                std::span<const std::int64_t> t_grid, Rule rule,
                                std::int64_t reps, std::size_t workers = 1);

struct ShareCheckpoint {
  std::int64_t waves = 0;
  double mean = 0.0;
  double se = 0.0;
};

std::vector<ShareCheckpoint> share_trajectory(const Instance& instance,
                                              const ExperimentConfig& config, Rule rule,
                                              std::span<const std::int64_t> t_grid,
                                              std::int64_t reps, std::size_t workers = 1);

}  // namespace bailab
