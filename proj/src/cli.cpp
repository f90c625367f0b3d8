#include "bailab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bailab/allocate.hpp"
#include "bailab/dp.hpp"
#include "bailab/errors.hpp"
#include "bailab/harness.hpp"
#include "bailab/io.hpp"
#include "bailab/ldp.hpp"
#include "bailab/model.hpp"
#include "bailab/posterior.hpp"

namespace bailab::cli {
namespace {

using io::json;

struct InstanceOptions {
  std::vector<double> theta;
  std::size_t cl_k = 0;
  std::size_t cl_index = 0;
  std::string file;
};

void add_instance_options(CLI::App* sub, InstanceOptions& o) {
  sub->add_option("--theta", o.theta, "Comma-separated success probabilities")
      ->delimiter(',');
  sub->add_option("--cl-k", o.cl_k, "Arm count of a hard-family instance (with --cl-index)");
  sub->add_option("--cl-index", o.cl_index, "Member 1..k of the hard family");
  sub->add_option("--instance", o.file, "Instance JSON file {\"theta\": [...]}");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::config, "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::config, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorCode::config, "failed writing '" + path + "'");
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Loads `key = value` lines ('#' starts a comment) into the options of
// `sub` named --key. Options already given on the command line keep their
// values. Values go through the same conversion as flags, so a malformed
// value fails exactly like a malformed flag.
void apply_config_file(CLI::App& sub, const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::vector<std::string> seen;
  for (int number = 1; std::getline(in, line); ++number) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = path + ":" + std::to_string(number);
    if (eq == std::string::npos) throw Error(ErrorCode::config, where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (key.empty() || key == "config" || key == "help")
      throw Error(ErrorCode::config, where + ": invalid key '" + key + "'");
    if (std::find(seen.begin(), seen.end(), key) != seen.end())
      throw Error(ErrorCode::config, where + ": duplicate key '" + key + "'");
    seen.push_back(key);
    CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr) throw Error(ErrorCode::config, where + ": unknown key '" + key + "'");
    if (opt->count() > 0) continue;
    try {
      opt->add_result(value);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw Error(ErrorCode::config, where + ": " + e.what());
    }
  }
}

Instance resolve_instance(const InstanceOptions& o) {
  const int given = (!o.theta.empty() ? 1 : 0) + (o.cl_k != 0 || o.cl_index != 0 ? 1 : 0) +
                    (!o.file.empty() ? 1 : 0);
  if (given != 1)
    throw Error(ErrorCode::config,
                "give exactly one of --theta, --cl-k/--cl-index, or --instance");
  if (!o.theta.empty()) return validate_instance(o.theta);
  if (!o.file.empty()) {
    json j;
    try {
      j = json::parse(read_file(o.file));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::config, std::string("malformed instance JSON: ") + e.what());
    }
    return io::instance_from_json(j);
  }
  if (o.cl_k == 0 || o.cl_index == 0)
    throw Error(ErrorCode::config, "--cl-k and --cl-index must be given together");
  return make_cl_instance(o.cl_k, o.cl_index);
}

json predictions(const Instance& instance) {
  const GammaSolution gamma = solve_gamma_star(instance);
  const double log_k = std::log(static_cast<double>(instance.k()));
  // Exponent of a static equal split: min_j G_j(1/k, 1/k).
  const double even = 1.0 / static_cast<double>(instance.k());
  double uniform_rate = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < instance.k(); ++d) {
    if (d == instance.best_arm()) continue;
    uniform_rate = std::min(
        uniform_rate, rate_g(even, even, instance.best_value(), instance.theta(d)).value);
  }
  return json{{"gamma_star", gamma.gamma_star},
              {"gamma_star_label", "rate with best-arm share fixed at 1/2"},
              {"rho", gamma.rho},
              {"pinsker_bound", pinsker_bound(instance)},
              {"capped_rate", kRateCapConstant / log_k * gamma.gamma_star},
              {"uniform_rate", uniform_rate}};
}

// ---- instance ------------------------------------------------------------

struct InstanceCommand {
  std::size_t k = 0;
  std::size_t index = 0;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("instance", "Emit a member of the hard instance family");
    sub->add_option("--k", k, "Arm count (>= 2)")->required();
    sub->add_option("--index", index, "Member index 1..k")->required();
  }
  void run(std::ostream& out) const { out << io::dump(io::to_json(make_cl_instance(k, index))); }
};

// ---- gamma ---------------------------------------------------------------

struct GammaCommand {
  InstanceOptions instance;
  double tol = kGammaTolerance;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("gamma", "Solve for the optimal allocation and rate");
    add_instance_options(sub, instance);
    sub->add_option("--tol", tol, "Bracket width on the rate")->capture_default_str();
  }
  void run(std::ostream& out) const {
    const Instance inst = resolve_instance(instance);
    if (!(tol > 0.0)) throw Error(ErrorCode::config, "--tol must be positive");
    json j = io::to_json(solve_gamma_star(inst, tol));
    j["theta"] = inst.theta();
    out << io::dump(j);
  }
};

// ---- bounds --------------------------------------------------------------

struct BoundsCommand {
  InstanceOptions instance;
  std::int64_t horizon = 0;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("bounds", "Complexity, rate bounds and the lower-bound calculator");
    add_instance_options(sub, instance);
    sub->add_option("--T", horizon, "Budget T for the lower-bound calculator")->required();
  }
  void run(std::ostream& out) const {
    const Instance inst = resolve_instance(instance);
    if (horizon < 1) throw Error(ErrorCode::config, "--T must be >= 1");
    json j = io::to_json(bound_report(inst, horizon));
    j["theta"] = inst.theta();
    out << io::dump(j);
  }
};

// ---- simulate ------------------------------------------------------------

struct SimulateCommand {
  InstanceOptions instance;
  std::string rule = "exploration";
  std::int64_t wave_size = 1;
  std::vector<std::int64_t> t_grid;
  std::int64_t reps = 1000;
  std::uint64_t seed = 1;
  std::vector<double> prior_alpha{1.0};
  std::vector<double> prior_beta{1.0};
  std::int64_t posterior_draws = 10'000;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::string out_dir;
  std::string out_csv;
  std::string out_json;
  std::string config_path;
  CLI::App* sub = nullptr;

  void attach(CLI::App& app) {
    sub = app.add_subcommand("simulate", "Replicated adaptive experiments");
    sub->add_option("--config", config_path,
                    "Flat 'key = value' file keyed by long flag names; flags override it")
        ->check(CLI::ExistingFile);
    add_instance_options(sub, instance);
    sub->add_option("--rule", rule, "exploration | thompson | uniform")->capture_default_str();
    sub->add_option("--N", wave_size, "Wave size")->capture_default_str();
    sub->add_option("--T-grid", t_grid, "Comma-separated wave counts (required)")->delimiter(',');
    sub->add_option("--reps", reps, "Replications per grid point")->capture_default_str();
    sub->add_option("--seed", seed, "Master seed")->capture_default_str();
    sub->add_option("--prior-alpha", prior_alpha, "Prior alpha, one value or one per arm")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--prior-beta", prior_beta, "Prior beta, one value or one per arm")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--posterior-draws", posterior_draws, "Monte Carlo draws per wave")
        ->capture_default_str();
    sub->add_option("--workers", workers, "Worker threads (output does not depend on it)");
    sub->add_option("--out-dir", out_dir,
                    std::string("Output directory (default $") + kOutDirEnv + " or .)");
    sub->add_option("--out-csv", out_csv, "Regret CSV path (default <out-dir>/simulate.csv)");
    sub->add_option("--out-json", out_json, "Summary JSON path (default <out-dir>/simulate.json)");
  }

  void run(std::ostream& out) {
    if (!config_path.empty()) apply_config_file(*sub, config_path);
    if (t_grid.empty()) throw Error(ErrorCode::config, "--T-grid is required");
    const Instance inst = resolve_instance(instance);
    const Rule parsed_rule = parse_rule(rule);
    ExperimentConfig config;
    config.wave_size = wave_size;
    config.waves = t_grid.empty() ? 0 : *std::max_element(t_grid.begin(), t_grid.end());
    config.prior_alpha = prior_alpha;
    config.prior_beta = prior_beta;
    config.seed = seed;
    config.posterior_draws = posterior_draws;
    try {
      config.validate(inst.k());
      if (reps < 1) throw Error(ErrorCode::invalid_argument, "--reps must be >= 1");
      for (auto t : t_grid) {
        if (t < 1) throw Error(ErrorCode::invalid_argument, "--T-grid entries must be >= 1");
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::config, e.what());
    }

    std::string dir = out_dir;
    if (dir.empty()) {
      const char* env = std::getenv(kOutDirEnv);
      dir = env != nullptr && *env != '\0' ? env : ".";
    }
    const std::string csv_path =
        !out_csv.empty() ? out_csv : (std::filesystem::path(dir) / "simulate.csv").string();
    const std::string json_path =
        !out_json.empty() ? out_json : (std::filesystem::path(dir) / "simulate.json").string();

    const auto rows = estimate_regret_grid(inst, config, parsed_rule, t_grid, reps, workers);

    std::vector<io::RegretRow> csv_rows;
    std::vector<ExponentPoint> points;
    json row_json = json::array();
    for (const auto& row : rows) {
      csv_rows.push_back(io::make_row(parsed_rule, inst.k(), row, seed));
      points.push_back({static_cast<double>(row.wave_size * row.waves), row.regret_hat});
      row_json.push_back(io::to_json(row));
    }
    std::ostringstream csv;
    io::write_regret_csv(csv, csv_rows);
    write_file(csv_path, csv.str());

    json fit = nullptr;
    try {
      fit = io::to_json(fit_exponent(points));
    } catch (const Error&) {
      // fewer than two grid points with positive regret
    }
    const auto& last = *std::max_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return a.waves < b.waves;
    });
    const json pred = predictions(inst);
    json shares = json::array();
    for (std::size_t d = 0; d < inst.k(); ++d) {
      shares.push_back({{"arm", d + 1},
                        {"empirical_share", last.arm_share_mean[d]},
                        {"rho", pred.at("rho")[d]}});
    }

    json summary{{"schema_version", io::kSchemaVersion},
                 {"instance", io::to_json(inst)},
                 {"rule", rule},
                 {"N", wave_size},
                 {"T_grid", t_grid},
                 {"reps", reps},
                 {"seed", seed},
                 {"posterior_draws", posterior_draws},
                 {"prior_alpha", prior_alpha},
                 {"prior_beta", prior_beta},
                 {"rows", row_json},
                 {"fit", fit},
                 {"predictions", pred},
                 {"empirical_shares_final_T", shares},
                 {"empirical_share_definition", "m_T[d] / (N T)"},
                 {"csv", csv_path}};
    write_file(json_path, io::dump(summary));
    out << io::dump(summary);
  }
};

// ---- dp ------------------------------------------------------------------

struct DpCommand {
  std::size_t k = 2;
  std::int64_t wave_size = 1;
  std::int64_t horizon = 1;
  std::string objective = "welfare";
  std::vector<double> prior_alpha{1.0};
  std::vector<double> prior_beta{1.0};
  std::uint64_t state_cap = kDefaultStateCap;
  std::string policy_csv;
  std::size_t sample = 10;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("dp", "Exact backward induction at small scale");
    sub->add_option("--k", k, "Arm count")->capture_default_str();
    sub->add_option("--N", wave_size, "Wave size")->capture_default_str();
    sub->add_option("--T", horizon, "Number of waves (0 allowed)")->capture_default_str();
    sub->add_option("--objective", objective, "welfare | bayes_regret")->capture_default_str();
    sub->add_option("--prior-alpha", prior_alpha, "Prior alpha, one value or one per arm")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--prior-beta", prior_beta, "Prior beta, one value or one per arm")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--state-cap", state_cap, "Maximum reachable states")->capture_default_str();
    sub->add_option("--policy-csv", policy_csv, "Write the full policy table here");
    sub->add_option("--sample", sample, "Policy entries echoed in the JSON")->capture_default_str();
  }

  void run(std::ostream& out) const {
    const Objective obj = parse_objective(objective);
    ExperimentConfig priors;
    priors.prior_alpha = prior_alpha;
    priors.prior_beta = prior_beta;
    if (k < 1 || wave_size < 1 || horizon < 0)
      throw Error(ErrorCode::config, "dp needs --k >= 1, --N >= 1, --T >= 0");
    try {
      priors.validate(k);
    } catch (const Error& e) {
      throw Error(ErrorCode::config, e.what());
    }
    const BetaPosterior prior(priors.alpha_for(k), priors.beta_for(k));
    const DPSolution solution = solve_dp(k, wave_size, horizon, prior, obj, state_cap);
    const auto table = solution.policy_table();

    json policy = json::array();
    for (std::size_t i = 0; i < std::min(sample, table.size()); ++i) {
      const auto& e = table[i];
      policy.push_back({{"t", e.state.t}, {"m", e.state.m}, {"r", e.state.r}, {"n", e.action}});
    }
    if (!policy_csv.empty()) {
      std::ostringstream csv;
      io::write_policy_csv(csv, table, k);
      write_file(policy_csv, csv.str());
    }
    out << io::dump(json{{"schema_version", io::kSchemaVersion},
                         {"value", solution.value()},
                         {"objective", objective},
                         {"k", k},
                         {"N", wave_size},
                         {"T", horizon},
                         {"states", solution.reachable().total},
                         {"terminal_states", solution.reachable().terminal},
                         {"canonical_states", solution.canonical_states()},
                         {"policy_sample", policy}});
  }
};

// ---- report --------------------------------------------------------------

struct ReportCommand {
  InstanceOptions instance;
  std::string csv_path;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("report", "Join simulate output with rate predictions");
    add_instance_options(sub, instance);
    sub->add_option("--csv", csv_path, "Regret CSV written by simulate")->required();
  }

  void run(std::ostream& out) const {
    const Instance inst = resolve_instance(instance);
    std::istringstream in(read_file(csv_path));
    const auto rows = io::read_regret_csv(in);
    const json pred = predictions(inst);
    const double gamma = pred.at("gamma_star").get<double>();

    json joined = json::array();
    std::vector<ExponentPoint> points;
    for (const auto& r : rows) {
      if (r.k != inst.k()) throw Error(ErrorCode::config, "CSV arm count does not match instance");
      points.push_back({static_cast<double>(r.wave_size * r.waves), r.regret_hat});
      joined.push_back({{"rule", r.rule},
                        {"N", r.wave_size},
                        {"T", r.waves},
                        {"reps", r.reps},
                        {"regret_hat", r.regret_hat},
                        {"err_prob_hat", r.err_prob_hat},
                        {"exponent_point", r.exponent_point},
                        {"exponent_over_gamma_star", r.exponent_point / gamma},
                        {"share_best_mean", r.share_best_mean}});
    }
    json fit = nullptr;
    try {
      const ExponentFit f = fit_exponent(points);
      fit = io::to_json(f);
      fit["exponent_over_gamma_star"] = f.exponent / gamma;
    } catch (const Error&) {
      // not enough positive-regret rows for a slope
    }
    out << io::dump(json{{"schema_version", io::kSchemaVersion},
                         {"instance", io::to_json(inst)},
                         {"predictions", pred},
                         {"rows", joined},
                         {"fit", fit}});
  }
};

bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::config:
    case ErrorCode::invalid_argument:
    case ErrorCode::too_few_arms:
    case ErrorCode::out_of_range:
    case ErrorCode::tied_best_arm:
      return true;
    default:
      return false;
  }
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fixed-budget best-arm identification laboratory", "bailab"};
  app.require_subcommand(1);
  InstanceCommand instance_cmd;
  GammaCommand gamma_cmd;
  BoundsCommand bounds_cmd;
  SimulateCommand simulate_cmd;
  DpCommand dp_cmd;
  ReportCommand report_cmd;
  instance_cmd.attach(app);
  gamma_cmd.attach(app);
  bounds_cmd.attach(app);
  simulate_cmd.attach(app);
  dp_cmd.attach(app);
  report_cmd.attach(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const auto* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    if (name == "instance") instance_cmd.run(out);
    else if (name == "gamma") gamma_cmd.run(out);
    else if (name == "bounds") bounds_cmd.run(out);
    else if (name == "simulate") simulate_cmd.run(out);
    else if (name == "dp") dp_cmd.run(out);
    else if (name == "report") report_cmd.run(out);
    return kExitOk;
  } catch (const Error& e) {
    err << "bailab: " << to_string(e.code()) << ": " << e.what() << '\n';
    return is_config_error(e.code()) ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    err << "bailab: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace bailab::cli
