#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bailab/model.hpp"
#include "bailab/rng.hpp"

namespace bailab {

// Independent Beta(alpha[d], beta[d]) beliefs, one per arm.
class BetaPosterior {
 public:
  // Throws Error{invalid_argument} on size mismatch, empty input, or any
  // non-positive parameter.
  BetaPosterior(std::vector<double> alpha, std::vector<double> beta);

  static BetaPosterior uniform(std::size_t k) {
    return BetaPosterior(std::vector<double>(k, 1.0), std::vector<double>(k, 1.0));
  }

  std::size_t k() const { return alpha_.size(); }
  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<double>& beta() const { return beta_; }
  double alpha(std::size_t d) const { return alpha_.at(d); }
  double beta(std::size_t d) const { return beta_.at(d); }

  friend bool operator==(const BetaPosterior&, const BetaPosterior&) = default;

 private:
  std::vector<double> alpha_;
  std::vector<double> beta_;
};

// (alpha0 + r, beta0 + m - r) per arm.
BetaPosterior update_posterior(const BetaPosterior& prior, const SufficientStats& stats);

double posterior_mean(const BetaPosterior& post, std::size_t d);

// Beta-Binomial predictive probability of s successes in n trials,
// evaluated in log space. Throws Error{invalid_argument} unless 0 <= s <= n.
double beta_binomial_pmf(double alpha, double beta, std::int64_t n, std::int64_t s);
double log_beta_binomial_pmf(double alpha, double beta, std::int64_t n, std::int64_t s);

// Monte Carlo probability that each arm has the largest theta: `draws` joint
// samples from the independent marginals, argmax ties to the lowest index.
// Entries are win counts over draws and sum to exactly 1.0.
std::vector<double> prob_best(const BetaPosterior& post, std::int64_t draws,
                              RandomStream& stream);

// P(theta_1 > theta_2) for a two-arm posterior by adaptive quadrature of
// pdf_1(x) * cdf_2(x). Throws Error{invalid_argument} unless k == 2.
double prob_best_exact_2arm(const BetaPosterior& post);

// E[max_d theta_d] under the independent marginals: integral over [0, 1] of
// 1 - prod_d cdf_d(x).
double expected_max_theta(const BetaPosterior& post);

}  // namespace bailab
