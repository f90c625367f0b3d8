#include "bailab/dp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <unordered_map>

#include <boost/container_hash/hash.hpp>

#include "bailab/errors.hpp"

namespace bailab {

std::string_view to_string(Objective objective) {
  switch (objective) {
    case Objective::welfare: return "welfare";
    case Objective::bayes_regret: return "bayes_regret";
  }
  return "unknown";
}

Objective parse_objective(std::string_view name) {
  if (name == "welfare") return Objective::welfare;
  if (name == "bayes_regret") return Objective::bayes_regret;
  throw Error(ErrorCode::config, "unknown objective '" + std::string(name) + "'");
}

namespace {

constexpr double kTieTolerance = 1e-13;

using Key = std::vector<std::int64_t>;

struct KeyHash {
  std::size_t operator()(const Key& key) const {
    return boost::hash_range(key.begin(), key.end());
  }
};

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b, std::uint64_t ceiling) {
  return (a > ceiling || b > ceiling - std::min(a, ceiling)) ? ceiling + 1 : a + b;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b, std::uint64_t ceiling) {
  if (a == 0 || b == 0) return 0;
  return a > (ceiling + 1) / b ? ceiling + 1 : std::min(a * b, ceiling + 1);
}

// Number of (m, r) with m a composition of `units` into k parts, r <= m.
std::uint64_t states_with_total(std::size_t k, std::int64_t units, std::uint64_t ceiling) {
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(units) + 1, 0);
  ways[0] = 1;
  for (std::size_t arm = 0; arm < k; ++arm) {
    std::vector<std::uint64_t> next(ways.size(), 0);
    for (std::int64_t s = 0; s <= units; ++s) {
      for (std::int64_t x = 0; x <= s; ++x) {
        const auto term = saturating_mul(ways[static_cast<std::size_t>(s - x)],
                                         static_cast<std::uint64_t>(x + 1), ceiling);
        next[static_cast<std::size_t>(s)] =
            saturating_add(next[static_cast<std::size_t>(s)], term, ceiling);
      }
    }
    ways = std::move(next);
  }
  return ways[static_cast<std::size_t>(units)];
}

void append_compositions(std::size_t k, std::int64_t remaining, Counts& prefix,
                         std::vector<Counts>& out) {
  if (prefix.size() + 1 == k) {
    prefix.push_back(remaining);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (std::int64_t x = 0; x <= remaining; ++x) {
    prefix.push_back(x);
    append_compositions(k, remaining - x, prefix, out);
    prefix.pop_back();
  }
}

// Advances `digits` as an odometer bounded by `limits`; false after the last.
bool advance(Counts& digits, const Counts& limits) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (digits[i] < limits[i]) {
      ++digits[i];
      return true;
    }
    digits[i] = 0;
  }
  return false;
}

DPState next_state(const DPState& state, const Counts& n, const Counts& s) {
  DPState next = state;
  for (std::size_t d = 0; d < n.size(); ++d) {
    next.m[d] += n[d];
    next.r[d] += s[d];
  }
  ++next.t;
  return next;
}

BetaPosterior posterior_at(const BetaPosterior& prior, const DPState& state) {
  return update_posterior(prior, SufficientStats{state.m, state.r});
}

// Index of the first value within tolerance of the optimum.
std::size_t select(const std::vector<double>& values, Objective objective) {
  const double optimum = objective == Objective::welfare
                             ? *std::max_element(values.begin(), values.end())
                             : *std::min_element(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::abs(values[i] - optimum) <= kTieTolerance) return i;
  }
  return 0;
}

void check_dimensions(std::size_t k, std::int64_t wave_size, std::int64_t horizon,
                      const BetaPosterior& prior) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "need at least one arm");
  if (wave_size < 1) throw Error(ErrorCode::invalid_argument, "wave size must be >= 1");
  if (horizon < 0) throw Error(ErrorCode::invalid_argument, "horizon must be >= 0");
  if (prior.k() != k) throw Error(ErrorCode::invalid_argument, "prior has the wrong arm count");
}

}  // namespace

StateCount enumerate_states(std::size_t k, std::int64_t wave_size, std::int64_t horizon,
                            std::uint64_t cap) {
  if (k < 1 || wave_size < 1 || horizon < 0)
    throw Error(ErrorCode::invalid_argument, "enumerate_states needs k, N >= 1 and T >= 0");
  StateCount count;
  for (std::int64_t t = 0; t <= horizon; ++t) {
    const auto here = states_with_total(k, wave_size * t, cap);
    count.per_wave.push_back(here);
    count.total = saturating_add(count.total, here, cap);
    if (count.total > cap)
      throw Error(ErrorCode::state_space_too_large,
                  "state space exceeds the cap of " + std::to_string(cap) + " states");
  }
  count.terminal = count.per_wave.back();
  return count;
}

std::vector<Counts> assignments(std::size_t k, std::int64_t wave_size) {
  std::vector<Counts> out;
  Counts prefix;
  append_compositions(k, wave_size, prefix, out);
  return out;
}

std::vector<Transition> transitions(const BetaPosterior& prior, const DPState& state,
                                    const Counts& n) {
  const std::size_t k = n.size();
  // Per-arm predictive tables, then their product over the odometer.
  std::vector<std::vector<double>> marginal(k);
  for (std::size_t d = 0; d < k; ++d) {
    const double a = prior.alpha(d) + static_cast<double>(state.r[d]);
    const double b = prior.beta(d) + static_cast<double>(state.m[d] - state.r[d]);
    for (std::int64_t s = 0; s <= n[d]; ++s) marginal[d].push_back(beta_binomial_pmf(a, b, n[d], s));
  }
  std::vector<Transition> out;
  Counts s(k, 0);
  do {
    double p = 1.0;
    for (std::size_t d = 0; d < k; ++d) p *= marginal[d][static_cast<std::size_t>(s[d])];
    out.push_back({s, p});
  } while (advance(s, n));
  return out;
}

double terminal_value(const BetaPosterior& prior, const DPState& state, Objective objective) {
  const BetaPosterior post = posterior_at(prior, state);
  double best_mean = 0.0;
  for (std::size_t d = 0; d < post.k(); ++d) best_mean = std::max(best_mean, posterior_mean(post, d));
  if (objective == Objective::welfare) return best_mean;
  return std::max(0.0, expected_max_theta(post) - best_mean);
}

Plan fixed_plan(std::vector<Counts> per_wave) {
  return [plan = std::move(per_wave)](const DPState& state) {
    return plan.at(static_cast<std::size_t>(state.t));
  };
}

struct DPSolution::Impl {
  std::size_t k = 0;
  std::int64_t wave_size = 0;
  std::int64_t horizon = 0;
  BetaPosterior prior;
  Objective objective = Objective::welfare;
  std::vector<std::int64_t> prior_class;
  std::vector<Counts> actions;
  StateCount reachable;
  std::unordered_map<Key, double, KeyHash> memo;
  double root_value = 0.0;

  Impl(std::size_t k_, std::int64_t n_, std::int64_t t_, BetaPosterior prior_, Objective obj)
      : k(k_), wave_size(n_), horizon(t_), prior(std::move(prior_)), objective(obj) {
    // Arms sharing a prior are exchangeable.
    prior_class.resize(k);
    for (std::size_t d = 0; d < k; ++d) {
      prior_class[d] = static_cast<std::int64_t>(d);
      for (std::size_t e = 0; e < d; ++e) {
        if (prior.alpha(e) == prior.alpha(d) && prior.beta(e) == prior.beta(d)) {
          prior_class[d] = prior_class[e];
          break;
        }
      }
    }
    actions = assignments(k, wave_size);
  }

  Key key(const DPState& state) const {
    std::vector<std::array<std::int64_t, 3>> arms(k);
    for (std::size_t d = 0; d < k; ++d) arms[d] = {prior_class[d], state.m[d], state.r[d]};
    std::sort(arms.begin(), arms.end());
    Key out{state.t};
    for (const auto& a : arms) out.insert(out.end(), a.begin(), a.end());
    return out;
  }

  template <typename Successor>
  double action_value(const DPState& state, const Counts& n, Successor&& successor) const {
    double total = 0.0;
    for (const auto& tr : transitions(prior, state, n))
      total += tr.probability * successor(next_state(state, n, tr.successes));
    return total;
  }

  double evaluate(const DPState& state) {
    const Key k_state = key(state);
    if (auto it = memo.find(k_state); it != memo.end()) return it->second;
    double value;
    if (state.t == horizon) {
      value = terminal_value(prior, state, objective);
    } else {
      std::vector<double> values;
      values.reserve(actions.size());
      for (const auto& n : actions)
        values.push_back(action_value(state, n, [this](const DPState& s) { return evaluate(s); }));
      value = values[select(values, objective)];
    }
    memo.emplace(k_state, value);
    return value;
  }

  double lookup(const DPState& state) const {
    auto it = memo.find(key(state));
    if (it == memo.end()) throw Error(ErrorCode::invalid_argument, "state not reachable");
    return it->second;
  }

  Counts best_action(const DPState& state) const {
    if (state.t >= horizon || state.m.size() != k || state.r.size() != k)
      throw Error(ErrorCode::invalid_argument, "no action at a terminal or malformed state");
    std::vector<double> values;
    values.reserve(actions.size());
    for (const auto& n : actions)
      values.push_back(action_value(state, n, [this](const DPState& s) { return lookup(s); }));
    return actions[select(values, objective)];
  }
};

double DPSolution::value() const { return impl_->root_value; }
Objective DPSolution::objective() const { return impl_->objective; }
const StateCount& DPSolution::reachable() const { return impl_->reachable; }
std::size_t DPSolution::canonical_states() const { return impl_->memo.size(); }
Counts DPSolution::action(const DPState& state) const { return impl_->best_action(state); }

Plan DPSolution::as_plan() const {
  return [impl = impl_](const DPState& state) { return impl->best_action(state); };
}

std::vector<PolicyEntry> DPSolution::policy_table() const {
  std::vector<PolicyEntry> table;
  for (std::int64_t t = 0; t < impl_->horizon; ++t) {
    for (const auto& m : assignments(impl_->k, impl_->wave_size * t)) {
      Counts r(impl_->k, 0);
      do {
        DPState state{m, r, t};
        table.push_back({state, impl_->best_action(state)});
      } while (advance(r, m));
    }
  }
  return table;
}

DPSolution solve_dp(std::size_t k, std::int64_t wave_size, std::int64_t horizon,
                    const BetaPosterior& prior, Objective objective, std::uint64_t cap) {
  check_dimensions(k, wave_size, horizon, prior);
  auto impl = std::make_shared<DPSolution::Impl>(k, wave_size, horizon, prior, objective);
  impl->reachable = enumerate_states(k, wave_size, horizon, cap);
  const DPState root{Counts(k, 0), Counts(k, 0), 0};
  impl->root_value = impl->evaluate(root);
  return DPSolution(std::move(impl));
}

double brute_force_value(std::size_t k, std::int64_t wave_size, std::int64_t horizon,
                         const BetaPosterior& prior, Objective objective, const Plan& plan,
                         std::uint64_t path_cap) {
  check_dimensions(k, wave_size, horizon, prior);
  std::uint64_t paths = 0;
  std::function<double(const DPState&)> expect = [&](const DPState& state) -> double {
    if (state.t == horizon) {
      if (++paths > path_cap)
        throw Error(ErrorCode::path_explosion,
                    "more than " + std::to_string(path_cap) + " outcome paths");
      return terminal_value(prior, state, objective);
    }
    const Counts n = plan(state);
    if (n.size() != k) throw Error(ErrorCode::invalid_argument, "plan returned wrong arm count");
    std::int64_t sum = 0;
    for (auto c : n) {
      if (c < 0) throw Error(ErrorCode::invalid_argument, "plan returned a negative count");
      sum += c;
    }
    if (sum != wave_size) throw Error(ErrorCode::invalid_argument, "plan must assign exactly N");
    double total = 0.0;
    for (const auto& tr : transitions(prior, state, n))
      total += tr.probability * expect(next_state(state, n, tr.successes));
    return total;
  };
  return expect(DPState{Counts(k, 0), Counts(k, 0), 0});
}

}  // namespace bailab
