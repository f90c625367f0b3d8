#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bailab/rng.hpp"

namespace bailab {

// Per-arm integer counts (subjects assigned, or successes observed).
using Counts = std::vector<std::int64_t>;

// True success probabilities of a Bernoulli bandit with a unique best arm.
// Arms are indexed from 0 in the API; serialized forms use 1-based labels.
class Instance {
 public:
  std::size_t k() const { return theta_.size(); }
  const std::vector<double>& theta() const { return theta_; }
  double theta(std::size_t d) const { return theta_.at(d); }
  std::size_t best_arm() const { return best_arm_; }
  double best_value() const { return theta_[best_arm_]; }
  // theta[best] - theta[d]
  double gap(std::size_t d) const { return theta_[best_arm_] - theta_.at(d); }
  double max_gap() const;

  friend Instance validate_instance(std::vector<double> theta);

 private:
  Instance(std::vector<double> theta, std::size_t best_arm)
      : theta_(std::move(theta)), best_arm_(best_arm) {}

  std::vector<double> theta_;
  std::size_t best_arm_;
};

// Throws Error{too_few_arms | out_of_range | tied_best_arm}.
Instance validate_instance(std::vector<double> theta);

// Member `index` (1..k) of the Carpentier-Locatelli hard family: instance 1
// has theta = 1/2 on arm 1 and 1/2 - d/(4k) elsewhere; instance d > 1 lifts
// arm d to 1/2 + d/(4k).
Instance make_cl_instance(std::size_t k, std::size_t index);

// Cumulative assignment counts m and success counts r per arm.
struct SufficientStats {
  Counts m;
  Counts r;

  static SufficientStats zeros(std::size_t k);

  std::size_t k() const { return m.size(); }
  std::int64_t total() const;
  // Throws Error{invalid_argument} unless 0 <= r[d] <= m[d] and sizes agree.
  void validate() const;
  // Adds one wave (n assigned, s successes).
  void accumulate(std::span<const std::int64_t> n, std::span<const std::int64_t> s);

  friend bool operator==(const SufficientStats&, const SufficientStats&) = default;
};

struct ExperimentConfig {
  std::int64_t wave_size = 1;      // N
  std::int64_t waves = 1;          // T
  // One entry broadcasts to every arm; otherwise one entry per arm.
  std::vector<double> prior_alpha{1.0};
  std::vector<double> prior_beta{1.0};
  std::uint64_t seed = 0;
  std::int64_t posterior_draws = 10'000;

  // Throws Error{invalid_argument} on N < 1, T < 1, non-positive prior
  // parameters, prior size mismatch with k, or draws < 1.
  void validate(std::size_t k) const;
  std::vector<double> alpha_for(std::size_t k) const;
  std::vector<double> beta_for(std::size_t k) const;
};

// s[d] ~ Binomial(n[d], theta[d]), consuming exactly n[d] uniforms per arm in
// arm order. Throws Error{invalid_argument} on negative counts or size
// mismatch.
Counts simulate_wave(const Instance& instance, std::span<const std::int64_t> n,
                     RandomStream& stream);

}  // namespace bailab
