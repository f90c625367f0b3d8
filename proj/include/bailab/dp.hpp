#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string_view>
#include <vector>

#include "bailab/model.hpp"
#include "bailab/posterior.hpp"

namespace bailab {

enum class Objective {
  welfare,       // maximize E[theta of the chosen arm]
  bayes_regret,  // minimize E[max_d theta_d - theta of the chosen arm]
};

std::string_view to_string(Objective objective);
Objective parse_objective(std::string_view name);

// Sufficient statistics after t waves; sum(m) == N * t.
struct DPState {
  Counts m;
  Counts r;
  std::int64_t t = 0;

  friend bool operator==(const DPState&, const DPState&) = default;
};

struct StateCount {
  std::vector<std::uint64_t> per_wave;  // index t = 0..T
  std::uint64_t terminal = 0;           // states at t = T
  std::uint64_t total = 0;              // all t
};

inline constexpr std::uint64_t kDefaultStateCap = 10'000'000;
inline constexpr std::uint64_t kDefaultPathCap = 1'000'000;

// Every (m, r) with sum(m) = N t and 0 <= r <= m is reachable, so the count
// at wave t is the sum over compositions m of N t of prod_d (m_d + 1).
// Throws Error{state_space_too_large} when the total exceeds `cap`.
StateCount enumerate_states(std::size_t k, std::int64_t wave_size, std::int64_t horizon,
                            std::uint64_t cap = kDefaultStateCap);

// All assignment vectors n with sum N, in increasing lexicographic order.
std::vector<Counts> assignments(std::size_t k, std::int64_t wave_size);

struct Transition {
  Counts successes;
  double probability = 0.0;
};

// Joint Beta-Binomial law of the wave outcome s given the state and n.
std::vector<Transition> transitions(const BetaPosterior& prior, const DPState& state,
                                    const Counts& n);

// Value of a terminal state: max posterior mean (welfare) or
// E[max theta | data] - max posterior mean (bayes_regret).
double terminal_value(const BetaPosterior& prior, const DPState& state, Objective objective);

// Maps the current state to the next wave's assignment.
using Plan = std::function<Counts(const DPState&)>;

// Non-adaptive plan: wave t assigns per_wave[t] regardless of outcomes.
Plan fixed_plan(std::vector<Counts> per_wave);

struct PolicyEntry {
  DPState state;
  Counts action;
};

class DPSolution {
 public:
  double value() const;
  Objective objective() const;
  // Reachable states by wave (full labelling).
  const StateCount& reachable() const;
  // Memo entries after collapsing exchangeable arms.
  std::size_t canonical_states() const;

  // Optimal assignment at a non-terminal reachable state; among equally
  // valued assignments the lexicographically smallest is returned.
  Counts action(const DPState& state) const;
  Plan as_plan() const;
  // Every reachable non-terminal state with its optimal assignment, ordered
  // by t then lexicographically by (m, r).
  std::vector<PolicyEntry> policy_table() const;

  struct Impl;
  explicit DPSolution(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const Impl> impl_;
};

// Exact backward induction over sufficient-statistic states.
// Throws Error{state_space_too_large} when the reachable states exceed `cap`.
DPSolution solve_dp(std::size_t k, std::int64_t wave_size, std::int64_t horizon,
                    const BetaPosterior& prior, Objective objective,
                    std::uint64_t cap = kDefaultStateCap);

// Expectation of the terminal objective under `plan`, summing path
// probabilities over every outcome sequence without memoization.
// Throws Error{path_explosion} once more than `path_cap` paths are visited.
double brute_force_value(std::size_t k, std::int64_t wave_size, std::int64_t horizon,
                         const BetaPosterior& prior, Objective objective, const Plan& plan,
                         std::uint64_t path_cap = kDefaultPathCap);

}  // namespace bailab
