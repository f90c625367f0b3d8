#include "bailab/allocate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bailab/errors.hpp"

namespace bailab {

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::exploration: return "exploration";
    case Rule::thompson: return "thompson";
    case Rule::uniform: return "uniform";
  }
  return "unknown";
}

Rule parse_rule(std::string_view name) {
  if (name == "exploration") return Rule::exploration;
  if (name == "thompson") return Rule::thompson;
  if (name == "uniform") return Rule::uniform;
  throw Error(ErrorCode::config, "unknown allocation rule '" + std::string(name) + "'");
}

AllocationShares exploration_shares(std::span<const double> p) {
  std::vector<double> q(p.size());
  double normalizer = 0.0;
  // 1 - p[d] as the sum of the other entries: with two arms both products are
  // then the same p[0] * p[1] and the shares are exactly one half.
  for (std::size_t d = 0; d < p.size(); ++d) {
    double rest = 0.0;
    for (std::size_t e = 0; e < p.size(); ++e) {
      if (e != d) rest += p[e];
    }
    q[d] = p[d] * rest;
    normalizer += q[d];
  }
  if (!(normalizer > 0.0))
    throw Error(ErrorCode::degenerate_belief,
                "every probability-of-best is 0 or 1; exploration shares are undefined");
  for (double& v : q) v /= normalizer;
  return {std::move(q), Rule::exploration};
}

AllocationShares thompson_shares(std::span<const double> p) {
  return {std::vector<double>(p.begin(), p.end()), Rule::thompson};
}

AllocationShares uniform_shares(std::size_t k) {
  return {std::vector<double>(k, 1.0 / static_cast<double>(k)), Rule::uniform};
}

Counts shares_to_counts(const AllocationShares& shares, std::int64_t wave_size) {
  if (wave_size < 1) throw Error(ErrorCode::invalid_argument, "wave size must be >= 1");
  const std::size_t k = shares.q.size();
  const auto total = static_cast<double>(wave_size);
  Counts n(k);
  std::vector<double> remainder(k);
  std::int64_t assigned = 0;
  for (std::size_t d = 0; d < k; ++d) {
    const double exact = shares.q[d] * total;
    n[d] = std::clamp(static_cast<std::int64_t>(std::floor(exact)), std::int64_t{0},
                      wave_size);
    remainder[d] = exact - static_cast<double>(n[d]);
    assigned += n[d];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  // Floors of shares summing to one fall short by fewer than k units; a share
  // vector off by rounding can overshoot, which is trimmed from the smallest
  // remainders.
  for (std::size_t i = 0; assigned < wave_size; i = (i + 1) % k) {
    ++n[order[i]];
    ++assigned;
  }
  for (std::size_t i = 0; assigned > wave_size; i = (i + 1) % k) {
    const std::size_t d = order[k - 1 - i];
    if (n[d] > 0) {
      --n[d];
      --assigned;
    }
  }
  return n;
}

std::size_t choose_policy(const BetaPosterior& post) {
  std::size_t best = 0;
  double best_mean = posterior_mean(post, 0);
  for (std::size_t d = 1; d < post.k(); ++d) {
    const double mean = posterior_mean(post, d);
    if (mean > best_mean) {
      best_mean = mean;
      best = d;
    }
  }
  return best;
}

}  // namespace bailab
