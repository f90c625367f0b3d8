#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bailab/allocate.hpp"
#include "bailab/dp.hpp"
#include "bailab/harness.hpp"
#include "bailab/ldp.hpp"
#include "bailab/model.hpp"

namespace bailab::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Arm indices are written 1-based in every serialized form.
json to_json(const Instance& instance);
// Throws Error{config} on a malformed object, plus validate_instance errors.
Instance instance_from_json(const json& j);

json to_json(const GammaSolution& solution);
json to_json(const ComplexityReport& report);
json to_json(const RegretEstimate& estimate);
json to_json(const ExponentFit& fit);

// Round-trip exact decimal form (17 significant digits); "nan" for NaN.
std::string format_number(double value);

struct RegretRow {
  std::string rule;
  std::size_t k = 0;
  std::int64_t wave_size = 0;
  std::int64_t waves = 0;
  std::int64_t reps = 0;
  double regret_hat = 0.0;
  double regret_se = 0.0;
  double err_prob_hat = 0.0;
  double exponent_point = 0.0;
  double share_best_mean = 0.0;
  double share_best_se = 0.0;
  std::uint64_t seed = 0;
};

RegretRow make_row(Rule rule, std::size_t k, const RegretEstimate& estimate, std::uint64_t seed);

// Columns: rule,k,N,T,reps,regret_hat,regret_se,err_prob_hat,exponent_point,
// share_best_mean,share_best_se,seed,schema_version
void write_regret_csv(std::ostream& out, std::span<const RegretRow> rows);
// Throws Error{config} on a malformed header or row.
std::vector<RegretRow> read_regret_csv(std::istream& in);

// Columns: t,m1..mk,r1..rk,n1..nk
void write_policy_csv(std::ostream& out, std::span<const PolicyEntry> table, std::size_t k);

// Pretty-printed with a trailing newline.
std::string dump(const json& j);

}  // namespace bailab::io
