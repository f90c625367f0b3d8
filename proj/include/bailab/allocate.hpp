#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bailab/model.hpp"
#include "bailab/posterior.hpp"

namespace bailab {

enum class Rule { exploration, thompson, uniform };

std::string_view to_string(Rule rule);
// Throws Error{config} for an unknown name.
Rule parse_rule(std::string_view name);

struct AllocationShares {
  std::vector<double> q;
  Rule rule = Rule::uniform;
};

// q[d] proportional to p[d] * (1 - p[d]) for a probability vector p.
// Throws Error{degenerate_belief} when every p[d] is 0 or 1.
AllocationShares exploration_shares(std::span<const double> p);

// q = p.
AllocationShares thompson_shares(std::span<const double> p);

AllocationShares uniform_shares(std::size_t k);

// Largest-remainder apportionment of N units: floor(q[d] * N) each, then the
// leftover units one at a time to the largest fractional remainders, ties to
// the lowest index. The result always sums to N.
Counts shares_to_counts(const AllocationShares& shares, std::int64_t wave_size);

// Arm with the largest posterior mean, ties to the lowest index.
std::size_t choose_policy(const BetaPosterior& post);

}  // namespace bailab
