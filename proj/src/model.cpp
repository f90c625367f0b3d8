#include "bailab/model.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "bailab/errors.hpp"

namespace bailab {

double Instance::max_gap() const {
  const double worst = *std::min_element(theta_.begin(), theta_.end());
  return best_value() - worst;
}

Instance validate_instance(std::vector<double> theta) {
  if (theta.size() < 2)
    throw Error(ErrorCode::too_few_arms, "an instance needs at least two arms");
  for (std::size_t d = 0; d < theta.size(); ++d) {
    if (!(theta[d] > 0.0 && theta[d] < 1.0))
      throw Error(ErrorCode::out_of_range,
                  "theta[" + std::to_string(d) + "] must lie strictly inside (0, 1)");
  }
  const auto best = static_cast<std::size_t>(
      std::max_element(theta.begin(), theta.end()) - theta.begin());
  for (std::size_t d = 0; d < theta.size(); ++d) {
    if (d != best && theta[d] == theta[best])
      throw Error(ErrorCode::tied_best_arm, "the best arm is not unique");
  }
  return Instance(std::move(theta), best);
}

Instance make_cl_instance(std::size_t k, std::size_t index) {
  if (k < 2) throw Error(ErrorCode::too_few_arms, "the hard family needs k >= 2");
  if (index < 1 || index > k)
    throw Error(ErrorCode::out_of_range, "instance index must lie in 1..k");
  const double four_k = 4.0 * static_cast<double>(k);
  std::vector<double> theta(k);
  theta[0] = 0.5;
  for (std::size_t d = 2; d <= k; ++d)
    theta[d - 1] = 0.5 - static_cast<double>(d) / four_k;
  if (index > 1) theta[index - 1] = 0.5 + static_cast<double>(index) / four_k;
  return validate_instance(std::move(theta));
}

SufficientStats SufficientStats::zeros(std::size_t k) {
  return SufficientStats{Counts(k, 0), Counts(k, 0)};
}

std::int64_t SufficientStats::total() const {
  return std::accumulate(m.begin(), m.end(), std::int64_t{0});
}

void SufficientStats::validate() const {
  if (m.size() != r.size())
    throw Error(ErrorCode::invalid_argument, "m and r must have the same length");
  for (std::size_t d = 0; d < m.size(); ++d) {
    if (r[d] < 0 || r[d] > m[d])
      throw Error(ErrorCode::invalid_argument,
                  "stats for arm " + std::to_string(d) + " violate 0 <= r <= m");
  }
}

void SufficientStats::accumulate(std::span<const std::int64_t> n,
                                 std::span<const std::int64_t> s) {
  if (n.size() != m.size() || s.size() != m.size())
    throw Error(ErrorCode::invalid_argument, "wave size does not match arm count");
  for (std::size_t d = 0; d < m.size(); ++d) {
    if (n[d] < 0 || s[d] < 0 || s[d] > n[d])
      throw Error(ErrorCode::invalid_argument, "wave violates 0 <= s <= n");
  }
  for (std::size_t d = 0; d < m.size(); ++d) {
    m[d] += n[d];
    r[d] += s[d];
  }
}

void ExperimentConfig::validate(std::size_t k) const {
  if (wave_size < 1) throw Error(ErrorCode::invalid_argument, "wave size N must be >= 1");
  if (waves < 1) throw Error(ErrorCode::invalid_argument, "wave count T must be >= 1");
  if (posterior_draws < 1)
    throw Error(ErrorCode::invalid_argument, "posterior_draws must be >= 1");
  for (const auto* prior : {&prior_alpha, &prior_beta}) {
    if (prior->size() != 1 && prior->size() != k)
      throw Error(ErrorCode::invalid_argument,
                  "prior parameters need one value or one per arm");
    for (double v : *prior) {
      if (!(v > 0.0)) throw Error(ErrorCode::invalid_argument, "prior parameters must be > 0");
    }
  }
}

namespace {
std::vector<double> broadcast(const std::vector<double>& v, std::size_t k) {
  return v.size() == 1 ? std::vector<double>(k, v.front()) : v;
}
}  // namespace

std::vector<double> ExperimentConfig::alpha_for(std::size_t k) const {
  return broadcast(prior_alpha, k);
}
std::vector<double> ExperimentConfig::beta_for(std::size_t k) const {
  return broadcast(prior_beta, k);
}

Counts simulate_wave(const Instance& instance, std::span<const std::int64_t> n,
                     RandomStream& stream) {
  if (n.size() != instance.k())
    throw Error(ErrorCode::invalid_argument, "count vector does not match arm count");
  for (auto c : n) {
    if (c < 0) throw Error(ErrorCode::invalid_argument, "negative assignment count");
  }
  Counts s(n.size(), 0);
  for (std::size_t d = 0; d < n.size(); ++d) s[d] = stream.binomial(n[d], instance.theta(d));
  return s;
}

}  // namespace bailab
