#include "bailab/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "bailab/errors.hpp"

namespace bailab::io {

json to_json(const Instance& instance) {
  return json{{"schema_version", kSchemaVersion},
              {"theta", instance.theta()},
              {"best_arm", instance.best_arm() + 1}};
}

Instance instance_from_json(const json& j) {
  if (!j.is_object() || !j.contains("theta") || !j.at("theta").is_array())
    throw Error(ErrorCode::config, "instance JSON needs a \"theta\" array");
  std::vector<double> theta;
  for (const auto& v : j.at("theta")) {
    if (!v.is_number()) throw Error(ErrorCode::config, "theta entries must be numbers");
    theta.push_back(v.get<double>());
  }
  Instance instance = validate_instance(std::move(theta));
  if (j.contains("best_arm") &&
      (!j.at("best_arm").is_number_integer() ||
       j.at("best_arm").get<std::int64_t>() != static_cast<std::int64_t>(instance.best_arm() + 1)))
    throw Error(ErrorCode::config, "best_arm does not match argmax theta");
  return instance;
}

json to_json(const GammaSolution& solution) {
  json residuals = json::array();
  for (const auto& r : solution.residuals)
    residuals.push_back({{"arm", r.arm + 1}, {"residual", r.residual}});
  return json{{"schema_version", kSchemaVersion},
              {"gamma_star", solution.gamma_star},
              {"gamma_star_label", "rate with best-arm share fixed at 1/2"},
              {"rho", solution.rho},
              {"residuals", residuals}};
}

json to_json(const ComplexityReport& report) {
  return json{{"schema_version", kSchemaVersion},
              {"k", report.k},
              {"T", report.horizon},
              {"H", report.h},
              {"pinsker_bound", report.pinsker_bound},
              {"gamma_star", report.gamma_star},
              {"gamma_star_label", "rate with best-arm share fixed at 1/2"},
              {"cl_bound_log", report.cl_bound_log},
              {"kasy_rate", report.kasy_rate},
              {"capped_rate", report.capped_rate},
              {"cap_constant", kRateCapConstant},
              {"lower_bound_constant", kLowerBoundConstant},
              {"lower_bound_rate", report.lower_bound_rate},
              {"exponent_ratio", report.exponent_ratio},
              {"cap_exceeds_claim", report.cap_exceeds_claim}};
}

json to_json(const RegretEstimate& e) {
  return json{{"N", e.wave_size},
              {"T", e.waves},
              {"reps", e.reps},
              {"regret_hat", e.regret_hat},
              {"regret_se", e.regret_se},
              {"err_prob_hat", e.err_prob_hat},
              {"exponent_point", e.exponent_point},
              {"share_best_mean", e.share_best_mean},
              {"share_best_se", e.share_best_se},
              {"arm_share_mean", e.arm_share_mean},
              {"choice_freq", e.choice_freq},
              {"degenerate_waves", e.degenerate_waves}};
}

json to_json(const ExponentFit& fit) {
  json dropped = json::array();
  for (auto i : fit.dropped) dropped.push_back(i);
  return json{{"exponent", fit.exponent},
              {"exponent_se", fit.exponent_se},
              {"intercept", fit.intercept},
              {"points_used", fit.used},
              {"dropped", dropped}};
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

RegretRow make_row(Rule rule, std::size_t k, const RegretEstimate& e, std::uint64_t seed) {
  return RegretRow{std::string(to_string(rule)), k, e.wave_size, e.waves, e.reps,
                   e.regret_hat, e.regret_se, e.err_prob_hat, e.exponent_point,
                   e.share_best_mean, e.share_best_se, seed};
}

namespace {

constexpr const char* kRegretHeader =
    "rule,k,N,T,reps,regret_hat,regret_se,err_prob_hat,exponent_point,"
    "share_best_mean,share_best_se,seed,schema_version";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

template <typename T>
T parse_cell(const std::string& cell) {
  try {
    std::size_t used = 0;
    T value;
    if constexpr (std::is_same_v<T, double>) {
      if (cell == "nan") return std::nan("");
      value = std::stod(cell, &used);
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      value = std::stoull(cell, &used);
    } else {
      value = static_cast<T>(std::stoll(cell, &used));
    }
    if (used != cell.size()) throw std::invalid_argument(cell);
    return value;
  } catch (const std::exception&) {
    throw Error(ErrorCode::config, "malformed CSV cell '" + cell + "'");
  }
}

}  // namespace

void write_regret_csv(std::ostream& out, std::span<const RegretRow> rows) {
  out << kRegretHeader << '\n';
  for (const auto& r : rows) {
    out << r.rule << ',' << r.k << ',' << r.wave_size << ',' << r.waves << ',' << r.reps << ','
        << format_number(r.regret_hat) << ',' << format_number(r.regret_se) << ','
        << format_number(r.err_prob_hat) << ',' << format_number(r.exponent_point) << ','
        << format_number(r.share_best_mean) << ',' << format_number(r.share_best_se) << ','
        << r.seed << ',' << kSchemaVersion << '\n';
  }
}

std::vector<RegretRow> read_regret_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRegretHeader)
    throw Error(ErrorCode::config, "unexpected regret CSV header");
  std::vector<RegretRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line, ',');
    if (c.size() != 13) throw Error(ErrorCode::config, "regret CSV row needs 13 columns");
    RegretRow r;
    r.rule = c[0];
    r.k = parse_cell<std::size_t>(c[1]);
    r.wave_size = parse_cell<std::int64_t>(c[2]);
    r.waves = parse_cell<std::int64_t>(c[3]);
    r.reps = parse_cell<std::int64_t>(c[4]);
    r.regret_hat = parse_cell<double>(c[5]);
    r.regret_se = parse_cell<double>(c[6]);
    r.err_prob_hat = parse_cell<double>(c[7]);
    r.exponent_point = parse_cell<double>(c[8]);
    r.share_best_mean = parse_cell<double>(c[9]);
    r.share_best_se = parse_cell<double>(c[10]);
    r.seed = parse_cell<std::uint64_t>(c[11]);
    if (parse_cell<int>(c[12]) != kSchemaVersion)
      throw Error(ErrorCode::config, "unsupported regret CSV schema version");
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_policy_csv(std::ostream& out, std::span<const PolicyEntry> table, std::size_t k) {
  out << 't';
  for (const char* prefix : {"m", "r", "n"}) {
    for (std::size_t d = 1; d <= k; ++d) out << ',' << prefix << d;
  }
  out << '\n';
  for (const auto& entry : table) {
    out << entry.state.t;
    for (const Counts* v : {&entry.state.m, &entry.state.r, &entry.action}) {
      for (auto x : *v) out << ',' << x;
    }
    out << '\n';
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace bailab::io
