#include "bailab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "bailab/errors.hpp"
#include "bailab/posterior.hpp"

namespace bailab {
namespace {

template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

Snapshot snapshot(const Instance& instance, const BetaPosterior& prior,
                  const SufficientStats& stats, std::int64_t wave_size, std::int64_t waves) {
  Snapshot snap;
  snap.waves = waves;
  snap.chosen_arm = choose_policy(update_posterior(prior, stats));
  snap.regret = instance.gap(snap.chosen_arm);
  snap.stats = stats;
  snap.share_best = static_cast<double>(stats.m[instance.best_arm()]) /
                    static_cast<double>(wave_size * waves);
  return snap;
}

double mean_of(std::span<const double> xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

double standard_error(std::span<const double> xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const auto n = static_cast<double>(xs.size());
  return std::sqrt(ss / (n - 1.0) / n);
}

void check_grid(std::span<const std::int64_t> t_grid) {
  if (t_grid.empty()) throw Error(ErrorCode::invalid_argument, "empty T grid");
  for (auto t : t_grid) {
    if (t < 1) throw Error(ErrorCode::invalid_argument, "T grid entries must be >= 1");
  }
}

}  // namespace

ReplicationResult run_replication(const Instance& instance, const ExperimentConfig& config,
                                  Rule rule, std::uint64_t rep_index,
                                  std::span<const std::int64_t> checkpoints) {
  const std::size_t k = instance.k();
  config.validate(k);
  for (auto c : checkpoints) {
    if (c < 1 || c > config.waves)
      throw Error(ErrorCode::invalid_argument, "checkpoint outside 1..T");
  }
  const BetaPosterior prior(config.alpha_for(k), config.beta_for(k));
  const AllocationShares even = uniform_shares(k);

  ReplicationResult result;
  result.checkpoints.resize(checkpoints.size());
  SufficientStats stats = SufficientStats::zeros(k);
  Counts previous_target(k, 0);

  for (std::int64_t t = 0; t < config.waves; ++t) {
    const auto wave = static_cast<std::uint64_t>(t);
    Counts n;
    if (rule == Rule::uniform) {
      Counts target = shares_to_counts(even, config.wave_size * (t + 1));
      n.resize(k);
      for (std::size_t d = 0; d < k; ++d) n[d] = target[d] - previous_target[d];
      previous_target = std::move(target);
    } else {
      RandomStream draws =
          RandomStream::derive(config.seed, rep_index, wave, StreamPurpose::posterior);
      const auto p = prob_best(update_posterior(prior, stats), config.posterior_draws, draws);
      AllocationShares shares;
      if (rule == Rule::thompson) {
        shares = thompson_shares(p);
      } else {
        try {
          shares = exploration_shares(p);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::degenerate_belief) throw;
          shares = even;
          ++result.degenerate_waves;
        }
      }
      n = shares_to_counts(shares, config.wave_size);
    }
    RandomStream outcomes =
        RandomStream::derive(config.seed, rep_index, wave, StreamPurpose::outcomes);
    const Counts s = simulate_wave(instance, n, outcomes);
    stats.accumulate(n, s);

    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      if (checkpoints[c] == t + 1) {
        result.checkpoints[c] = snapshot(instance, prior, stats, config.wave_size, t + 1);
        result.checkpoints[c].degenerate_waves = result.degenerate_waves;
      }
    }
  }

  const Snapshot final_state = snapshot(instance, prior, stats, config.wave_size, config.waves);
  result.chosen_arm = final_state.chosen_arm;
  result.regret = final_state.regret;
  result.share_best = final_state.share_best;
  result.final_stats = std::move(stats);
  return result;
}

RegretEstimate summarize(const Instance& instance, std::int64_t wave_size,
                         std::span<const Snapshot> snapshots) {
  if (snapshots.empty()) throw Error(ErrorCode::invalid_argument, "no replications to summarize");
  const std::size_t k = instance.k();
  RegretEstimate est;
  est.wave_size = wave_size;
  est.waves = snapshots.front().waves;
  est.reps = static_cast<std::int64_t>(snapshots.size());
  const auto reps = static_cast<double>(snapshots.size());
  const double budget = static_cast<double>(wave_size * est.waves);

  std::vector<std::int64_t> chosen(k, 0);
  std::vector<double> regrets;
  std::vector<double> shares;
  est.arm_share_mean.assign(k, 0.0);
  regrets.reserve(snapshots.size());
  shares.reserve(snapshots.size());
  for (const auto& snap : snapshots) {
    ++chosen[snap.chosen_arm];
    est.degenerate_waves += snap.degenerate_waves;
    regrets.push_back(snap.regret);
    shares.push_back(snap.share_best);
    for (std::size_t d = 0; d < k; ++d)
      est.arm_share_mean[d] += static_cast<double>(snap.stats.m[d]) / budget;
  }
  for (double& v : est.arm_share_mean) v /= reps;

  est.choice_freq.resize(k);
  for (std::size_t d = 0; d < k; ++d) {
    est.choice_freq[d] = static_cast<double>(chosen[d]) / reps;
    est.regret_hat += instance.gap(d) * est.choice_freq[d];
  }
  est.err_prob_hat =
      static_cast<double>(est.reps - chosen[instance.best_arm()]) / reps;
  est.regret_se = standard_error(regrets, mean_of(regrets));
  est.exponent_point = est.regret_hat > 0.0 ? -std::log(est.regret_hat) / budget
                                            : std::numeric_limits<double>::quiet_NaN();
  est.share_best_mean = mean_of(shares);
  est.share_best_se = standard_error(shares, est.share_best_mean);
  return est;
}

RegretEstimate estimate_regret(const Instance& instance, const ExperimentConfig& config,
                               Rule rule, std::int64_t reps, std::size_t workers,
                               std::uint64_t rep_offset) {
  if (reps < 1) throw Error(ErrorCode::invalid_argument, "reps must be >= 1");
  config.validate(instance.k());
  std::vector<Snapshot> snaps(static_cast<std::size_t>(reps));
  const std::int64_t horizon[] = {config.waves};
  parallel_for(snaps.size(), workers, [&](std::size_t i) {
    auto result = run_replication(instance, config, rule, rep_offset + i, horizon);
    snaps[i] = std::move(result.checkpoints.front());
  });
  return summarize(instance, config.wave_size, snaps);
}

std::vector<RegretEstimate> estimate_regret_grid(const Instance& instance,
                                                 const ExperimentConfig& config, Rule rule,
                                                 std::span<const std::int64_t> t_grid,
                                                 std::int64_t reps, std::size_t workers) {
  if (reps < 1) throw Error(ErrorCode::invalid_argument, "reps must be >= 1");
  check_grid(t_grid);
  ExperimentConfig longest = config;
  longest.waves = *std::max_element(t_grid.begin(), t_grid.end());
  longest.validate(instance.k());

  const auto count = static_cast<std::size_t>(reps);
  std::vector<std::vector<Snapshot>> by_rep(count);
  parallel_for(count, workers, [&](std::size_t i) {
    by_rep[i] = run_replication(instance, longest, rule, i, t_grid).checkpoints;
  });

  std::vector<RegretEstimate> rows;
  std::vector<Snapshot> column(count);
  for (std::size_t c = 0; c < t_grid.size(); ++c) {
    for (std::size_t i = 0; i < count; ++i) column[i] = by_rep[i][c];
    rows.push_back(summarize(instance, config.wave_size, column));
  }
  return rows;
}

ExponentFit fit_exponent(std::span<const ExponentPoint> points) {
  ExponentFit fit;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].regret > 0.0) {
      xs.push_back(points[i].budget);
      ys.push_back(std::log(points[i].regret));
    } else {
      fit.dropped.push_back(i);
    }
  }
  fit.used = xs.size();
  if (xs.size() < 2)
    throw Error(ErrorCode::invalid_argument, "exponent fit needs two points with positive regret");
  const double x_mean = mean_of(xs);
  const double y_mean = mean_of(ys);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - x_mean) * (xs[i] - x_mean);
    sxy += (xs[i] - x_mean) * (ys[i] - y_mean);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::invalid_argument, "exponent fit needs distinct budgets");
  const double slope = sxy / sxx;
  fit.exponent = -slope;
  fit.intercept = y_mean - slope * x_mean;
  if (xs.size() > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double resid = ys[i] - (fit.intercept + slope * xs[i]);
      ssr += resid * resid;
    }
    fit.exponent_se = std::sqrt(ssr / static_cast<double>(xs.size() - 2) / sxx);
  } else {
    fit.exponent_se = std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

ExponentStudy estimate_exponent(const Instance& instance, const ExperimentConfig& config,
                                std::span<const std::int64_t> t_grid, Rule rule,
                                std::int64_t reps, std::size_t workers) {
  if (t_grid.size() < 3)
    throw Error(ErrorCode::invalid_argument, "exponent estimation needs at least three T values");
  ExponentStudy study;
  study.rows = estimate_regret_grid(instance, config, rule, t_grid, reps, workers);
  std::vector<ExponentPoint> points;
  for (const auto& row : study.rows)
    points.push_back({static_cast<double>(row.wave_size * row.waves), row.regret_hat});
  study.fit = fit_exponent(points);
  return study;
}

std::vector<ShareCheckpoint> share_trajectory(const Instance& instance,
                                              const ExperimentConfig& config, Rule rule,
                                              std::span<const std::int64_t> t_grid,
                                              std::int64_t reps, std::size_t workers) {
  std::vector<ShareCheckpoint> out;
  for (const auto& row : estimate_regret_grid(instance, config, rule, t_grid, reps, workers))
    out.push_back({row.waves, row.share_best_mean, row.share_best_se});
  return out;
}

}  // namespace bailab
