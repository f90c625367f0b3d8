// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every random quantity uses a fixed seed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bailab/allocate.hpp"
#include "bailab/cli.hpp"
#include "bailab/dp.hpp"
#include "bailab/harness.hpp"
#include "bailab/ldp.hpp"
#include "bailab/posterior.hpp"
#include "oracles.hpp"

using namespace bailab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Arms on (0.05, 0.95) whose sorted spacings are all at least `min_gap`.
std::vector<double> random_theta(std::mt19937_64& gen, std::size_t k, double min_gap) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (;;) {
    std::vector<double> theta(k);
    for (double& v : theta) v = u(gen);
    auto s = theta;
    std::sort(s.begin(), s.end());
    bool ok = true;
    for (std::size_t i = 1; i < k; ++i) ok = ok && s[i] - s[i - 1] >= min_gap;
    if (ok) return theta;
  }
}

Outcome ac1() {
  std::mt19937_64 gen(101);
  std::uniform_real_distribution<double> param(0.01, 20.0);
  std::uniform_int_distribution<std::int64_t> count(0, 200);
  std::int64_t formula_fail = 0, additivity_fail = 0;
  for (int trial = 0; trial < 100'000; ++trial) {
    const std::size_t k = 1 + trial % 5;
    std::vector<double> a(k), b(k);
    SufficientStats s1 = SufficientStats::zeros(k), s2 = SufficientStats::zeros(k);
    for (std::size_t d = 0; d < k; ++d) {
      a[d] = param(gen);
      b[d] = param(gen);
      s1.m[d] = count(gen);
      s1.r[d] = std::uniform_int_distribution<std::int64_t>(0, s1.m[d])(gen);
      s2.m[d] = count(gen);
      s2.r[d] = std::uniform_int_distribution<std::int64_t>(0, s2.m[d])(gen);
    }
    const BetaPosterior prior(a, b);
    const auto post = update_posterior(prior, s1);
    for (std::size_t d = 0; d < k; ++d) {
      if (post.alpha(d) != a[d] + static_cast<double>(s1.r[d]) ||
          post.beta(d) != b[d] + static_cast<double>(s1.m[d] - s1.r[d]))
        ++formula_fail;
    }
    SufficientStats both = s1;
    both.accumulate(s2.m, s2.r);
    const auto once = update_posterior(prior, both);
    const auto twice = update_posterior(post, s2);
    for (std::size_t d = 0; d < k; ++d) {
      // floating-point addition is not associative: allow two ulps
      const double ta = 4.5e-16 * once.alpha(d), tb = 4.5e-16 * once.beta(d);
      if (std::abs(once.alpha(d) - twice.alpha(d)) > ta ||
          std::abs(once.beta(d) - twice.beta(d)) > tb)
        ++additivity_fail;
    }
  }
  double worst = 0.0;
  std::uniform_real_distribution<double> pmf_param(0.05, 50.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double a = pmf_param(gen), b = pmf_param(gen);
    for (std::int64_t n = 0; n <= 50; ++n) {
      double total = 0.0;
      for (std::int64_t s = 0; s <= n; ++s) total += beta_binomial_pmf(a, b, n, s);
      worst = std::max(worst, std::abs(total - 1.0));
    }
  }
  Outcome o;
  o.pass = formula_fail == 0 && additivity_fail == 0 && worst < 1e-12;
  o.detail = "1e5 pairs: formula mismatches " + std::to_string(formula_fail) +
             ", additivity mismatches " + std::to_string(additivity_fail) +
             ", worst pmf normalization error " + fmt("%.3g", worst) + " (limit 1e-12)";
  return o;
}

Outcome ac2() {
  const std::int64_t draws = 100'000;
  std::mt19937_64 gen(202);
  std::uniform_int_distribution<std::int64_t> count(0, 40);
  RandomStream stream(202);
  int failures = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    SufficientStats stats = SufficientStats::zeros(2);
    for (std::size_t d = 0; d < 2; ++d) {
      stats.m[d] = count(gen);
      stats.r[d] = std::uniform_int_distribution<std::int64_t>(0, stats.m[d])(gen);
    }
    const auto post = update_posterior(BetaPosterior::uniform(2), stats);
    const double exact = prob_best_exact_2arm(post);
    const double mc = prob_best(post, draws, stream)[0];
    const double limit = 4 * std::sqrt(exact * (1 - exact) / static_cast<double>(draws));
    const double diff = std::abs(mc - exact);
    if (!(diff < limit) && !(diff == 0.0)) ++failures;
    if (limit > 0) worst_ratio = std::max(worst_ratio, diff / limit);
  }
  const BetaPosterior analytic({2.0, 1.0}, {1.0, 2.0});
  const double p = 5.0 / 6.0;
  const double exact_point = prob_best_exact_2arm(analytic);
  const double mc_point = prob_best(analytic, draws, stream)[0];
  const double limit = 4 * std::sqrt(p * (1 - p) / static_cast<double>(draws));
  const bool point_ok = std::abs(exact_point - p) < 1e-10 && std::abs(mc_point - p) < limit;
  Outcome o;
  o.pass = failures == 0 && point_ok;
  o.detail = "200 posteriors: " + std::to_string(failures) + " outside 4 sigma (worst " +
             fmt("%.2f", worst_ratio) + " of the limit); Beta(2,1) vs Beta(1,2): quadrature " +
             fmt("%.12f", exact_point) + ", Monte Carlo " + fmt("%.5f", mc_point) + " vs 5/6";
  return o;
}

Outcome ac3() {
  std::mt19937_64 gen(303);
  double worst_rel = 0.0, worst_residual = 0.0, worst_fine = 0.0;
  for (std::size_t k : {3, 3, 3, 3, 3, 4, 4, 4}) {
    const auto theta = random_theta(gen, k, 0.05);
    const auto sol = solve_gamma_star(validate_instance(theta));
    const double grid = oracle::gamma_grid_search(theta, 1e-3, 1e-4);
    worst_rel = std::max(worst_rel, std::abs(sol.gamma_star - grid) / grid);
    // diagnostic only: the same search on a finer share grid
    const double fine = oracle::gamma_grid_search(theta, 2.5e-4, 1e-4);
    worst_fine = std::max(worst_fine, std::abs(sol.gamma_star - fine) / fine);
    for (const auto& r : sol.residuals) worst_residual = std::max(worst_residual, std::abs(r.residual));
  }
  const auto two = solve_gamma_star(validate_instance({0.9, 0.6}));
  const double golden = oracle::rate_by_golden_section(0.5, 0.5, 0.9, 0.6).value;
  const bool rho_exact = two.rho == std::vector<double>{0.5, 0.5};
  const double two_err = std::abs(two.gamma_star - golden);
  Outcome o;
  o.pass = worst_rel < 1e-3 && worst_residual <= 1e-9 && rho_exact && two_err < 1e-6;
  o.detail = "5 k=3 + 3 k=4 instances: worst relative gap to grid " + fmt("%.3g", worst_rel) +
             " (limit 1e-3; " + fmt("%.3g", worst_fine) +
             " against a 2.5e-4 share grid), worst |residual| " + fmt("%.3g", worst_residual) +
             " (limit 1e-9); k=2 rho " + (rho_exact ? "(0.5,0.5) exactly" : "NOT (0.5,0.5)") +
             ", gamma* " + fmt("%.10f", two.gamma_star) + " vs golden-section " +
             fmt("%.10f", golden) + " (|diff| " + fmt("%.2g", two_err) + ")";
  return o;
}

Outcome ac4() {
  std::mt19937_64 gen(404);
  int violations = 0;
  double tightest = 1e300;
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = validate_instance(random_theta(gen, 2 + trial % 5, 0.05));
    const double lower = pinsker_bound(inst);
    const double g = solve_gamma_star(inst).gamma_star;
    if (lower > g) ++violations;
    tightest = std::min(tightest, g / lower);
  }
  Outcome o;
  o.pass = violations == 0;
  o.detail = "100 instances with k in 2..6: " + std::to_string(violations) +
             " violations; smallest gamma*/(1/(4H)) = " + fmt("%.4f", tightest);
  return o;
}

Outcome ac5() {
  using hp = oracle::high_precision;
  const hp ref = -log(hp(12)) - hp(2000) / (hp(16) * log(hp(2))) + 2 * sqrt(hp(10) * log(hp(120)));
  const double v = cl_regret_bound(2, 10, 16.0);
  const double err = std::abs(v - static_cast<double>(ref));
  std::vector<double> ratios;
  bool identity = true;
  for (std::size_t k : {2, 10, 100}) {
    const auto r = bound_report(make_cl_instance(k, 1), 100);
    ratios.push_back(r.exponent_ratio);
    identity = identity &&
               std::abs(r.kasy_rate / r.capped_rate - std::log(static_cast<double>(k)) / 800.0) <
                   1e-15 &&
               r.exponent_ratio == std::log(static_cast<double>(k)) / 800.0;
  }
  const bool monotone = ratios[0] < ratios[1] && ratios[1] < ratios[2];
  const auto report = bound_report(make_cl_instance(2, 1), 10);
  const bool embedded = report.cl_bound_log == v;
  Outcome o;
  o.pass = err < 1e-6 && std::abs(v + 168.98) < 0.005 && monotone && identity && embedded;
  o.detail = "log bound(2,10,16) = " + fmt("%.9f", v) + " (|diff| to 50-digit value " +
             fmt("%.2g", err) + "); ln(k)/800 over k = 2,10,100: " + fmt("%.6f", ratios[0]) +
             ", " + fmt("%.6f", ratios[1]) + ", " + fmt("%.6f", ratios[2]) +
             (monotone ? " increasing" : " NOT increasing");
  return o;
}

Outcome ac6() {
  const auto flat = BetaPosterior::uniform(2);
  double worst = 0.0;
  bool monotone = true;
  double prev = solve_dp(2, 1, 0, flat, Objective::welfare).value();
  double t1 = 0.0;
  for (std::int64_t t = 1; t <= 3; ++t) {
    const auto sol = solve_dp(2, 1, t, flat, Objective::welfare);
    const double brute = brute_force_value(2, 1, t, flat, Objective::welfare, sol.as_plan());
    worst = std::max(worst, std::abs(sol.value() - brute));
    monotone = monotone && sol.value() >= prev;
    prev = sol.value();
    if (t == 1) t1 = sol.value();
  }
  const double regret = solve_dp(2, 1, 1, flat, Objective::bayes_regret).value();
  const double sum_err = std::abs(t1 + regret - 2.0 / 3.0);
  const double seven = std::abs(t1 - 7.0 / 12.0);
  Outcome o;
  o.pass = worst < 1e-12 && seven < 1e-12 && monotone && sum_err < 1e-9;
  o.detail = "T=1..3: worst |DP - brute force| " + fmt("%.2g", worst) + "; T=1 value " +
             fmt("%.15f", t1) + " (7/12 off by " + fmt("%.2g", seven) + "); " +
             (monotone ? "nondecreasing in T" : "NOT monotone in T") +
             "; welfare + regret - 2/3 = " + fmt("%.2g", sum_err);
  return o;
}

Outcome ac7() {
  const auto inst = validate_instance({0.9, 0.6});
  ExperimentConfig config;
  config.wave_size = 1;
  config.seed = 707;
  const std::vector<std::int64_t> grid{40, 60, 80, 100};
  const auto study = estimate_exponent(inst, config, grid, Rule::uniform, 100'000, workers());
  const double g = rate_g(0.5, 0.5, 0.9, 0.6).value;
  const double e = study.fit.exponent;
  Outcome o;
  o.pass = e >= 0.5 * g && e <= 1.5 * g && study.fit.used == 4;
  o.detail = "OLS exponent " + fmt("%.5f", e) + " (se " + fmt("%.5f", study.fit.exponent_se) +
             ") vs band [" + fmt("%.5f", 0.5 * g) + ", " + fmt("%.5f", 1.5 * g) +
             "] around G = " + fmt("%.5f", g);
  return o;
}

Outcome ac8() {
  ExperimentConfig config;
  config.wave_size = 50;
  config.waves = 100;
  config.seed = 808;
  const auto three = validate_instance({0.7, 0.5, 0.3});
  const auto est = estimate_regret(three, config, Rule::exploration, 200, workers());
  const bool band = est.share_best_mean >= 0.40 && est.share_best_mean <= 0.60;

  // Two arms: replay realistic trajectories and check every wave's shares.
  const auto two = validate_instance({0.7, 0.5});
  std::int64_t waves_checked = 0, not_half = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    SufficientStats stats = SufficientStats::zeros(2);
    for (std::uint64_t t = 0; t < 100; ++t) {
      const auto post = update_posterior(BetaPosterior::uniform(2), stats);
      auto ps = RandomStream::derive(config.seed, rep, t, StreamPurpose::posterior);
      const auto p = prob_best(post, config.posterior_draws, ps);
      Counts n{25, 25};
      if (p[0] > 0.0 && p[0] < 1.0) {
        const auto q = exploration_shares(p);
        ++waves_checked;
        if (q.q[0] != 0.5 || q.q[1] != 0.5) ++not_half;
        n = shares_to_counts(q, 50);
      }
      auto os = RandomStream::derive(config.seed, rep, t, StreamPurpose::outcomes);
      const auto s = simulate_wave(two, n, os);
      stats.accumulate(n, s);
    }
  }
  // And through the harness: the cumulative split is exact at every wave.
  std::vector<std::int64_t> marks(100);
  std::iota(marks.begin(), marks.end(), std::int64_t{1});
  const auto traj = share_trajectory(two, config, Rule::exploration, marks, 200, workers());
  bool harness_half = true;
  for (const auto& c : traj) harness_half = harness_half && c.mean == 0.5 && c.se == 0.0;

  Outcome o;
  o.pass = band && not_half == 0 && waves_checked > 0 && harness_half;
  o.detail = "k=3, N=50, T=100, 200 reps: mean best-arm share " + fmt("%.4f", est.share_best_mean) +
             " (se " + fmt("%.4f", est.share_best_se) + ", band [0.40, 0.60]; " +
             fmt("%.1f", static_cast<double>(est.degenerate_waves) / 200.0) +
             " of 100 waves per replication had all draws favour one arm and were split uniformly); k=2: " +
             std::to_string(not_half) + " of " + std::to_string(waves_checked) +
             " replayed waves off (0.5,0.5), harness cumulative share " +
             (harness_half ? "exactly 0.5 at all 100 waves" : "NOT always 0.5");
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome ac9() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "bailab_acceptance_repro";
  fs::remove_all(dir);
  fs::create_directories(dir);
  bool identical = true;
  int runs = 0, failures = 0;
  for (const char* rule : {"exploration", "thompson", "uniform"}) {
    std::string reference;
    for (const char* w : {"1", "2", "4", "1"}) {
      const auto csv = (dir / (std::string(rule) + "_" + w + "_" + std::to_string(runs) + ".csv")).string();
      std::vector<std::string> args{"bailab", "simulate", "--theta", "0.7,0.5,0.3", "--rule", rule,
                                    "--N", "4", "--T-grid", "3,6,9", "--reps", "60", "--seed",
                                    "909", "--posterior-draws", "1000", "--workers", w,
                                    "--out-csv", csv, "--out-dir", dir.string()};
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      std::ostringstream out, err;
      if (cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err) != 0) ++failures;
      ++runs;
      const auto bytes = slurp(csv);
      if (reference.empty()) reference = bytes;
      identical = identical && bytes == reference && !bytes.empty();
    }
  }
  fs::remove_all(dir);
  Outcome o;
  o.pass = identical && failures == 0;
  o.detail = std::to_string(runs) + " simulate runs (3 rules x workers 1,2,4,1): CSVs " +
             (identical ? "byte-identical" : "DIFFER") + ", " + std::to_string(failures) +
             " failed runs";
  return o;
}

Outcome ac10() {
  ExperimentConfig config;
  config.wave_size = 10;
  config.waves = 50;
  config.seed = 1010;
  const auto est =
      estimate_regret(validate_instance({0.9, 0.1}), config, Rule::exploration, 1000, workers());
  Outcome o;
  o.pass = est.err_prob_hat < 0.01;
  o.detail = "1000 reps: err_prob_hat " + fmt("%.4f", est.err_prob_hat) + " (limit < 0.01)";
  return o;
}

struct Criterion {
  const char* id;
  const char* name;
  double time_limit_s;  // <= 0: none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "conjugate correctness", 10, ac1},
      {"AC2", "probability-of-best oracle agreement", 60, ac2},
      {"AC3", "rate optimum vs grid search", 120, ac3},
      {"AC4", "Pinsker lower bound on the rate optimum", 60, ac4},
      {"AC5", "bound calculators", 0, ac5},
      {"AC6", "backward induction vs enumeration", 30, ac6},
      {"AC7", "static-allocation exponent", 300, ac7},
      {"AC8", "exploration sampling shares", 300, ac8},
      {"AC9", "reproducibility across worker counts", 0, ac9},
      {"AC10", "easy-instance sanity", 0, ac10},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.1f s", seconds);
    if (c.time_limit_s > 0) {
      timing += fmt(", limit %.0f s", c.time_limit_s);
      if (seconds >= c.time_limit_s) {
        o.pass = false;
        timing += ", TOO SLOW";
      }
    }
    if (!o.pass) ++failed;
    std::printf("%s %-5s %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
