#include "bailab/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bailab/errors.hpp"
#include "bailab/numerics.hpp"

namespace bailab {

double bernoulli_kl(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(ErrorCode::invalid_argument, "KL needs p in [0, 1]");
  if (!(q > 0.0 && q < 1.0))
    throw Error(ErrorCode::invalid_argument, "KL needs q strictly inside (0, 1)");
  double value = 0.0;
  if (p > 0.0) value += p * std::log(p / q);
  if (p < 1.0) value += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return std::max(value, 0.0);
}

RateMinimum rate_g(double rho_best, double rho_j, double theta_best, double theta_j) {
  if (!(theta_best > 0.0 && theta_best < 1.0 && theta_j > 0.0 && theta_j < 1.0))
    throw Error(ErrorCode::invalid_argument, "rate function needs theta in (0, 1)");
  if (!(theta_best > theta_j))
    throw Error(ErrorCode::invalid_argument, "rate function needs theta_best > theta_j");
  if (!(rho_best >= 0.0) || !(rho_j >= 0.0))
    throw Error(ErrorCode::invalid_argument, "rate weights must be non-negative");
  const double weight = rho_best + rho_j;
  if (weight == 0.0) return {0.0, theta_j};
  const double z =
      (rho_best * numerics::logit(theta_best) + rho_j * numerics::logit(theta_j)) / weight;
  const double x = std::clamp(numerics::logistic(z), theta_j, theta_best);
  const double value = rho_best * bernoulli_kl(x, theta_best) + rho_j * bernoulli_kl(x, theta_j);
  return {value, x};
}

namespace {

// Smallest share in [0, 1/2] with G(1/2, share) >= target.
double share_needed(double target, double theta_best, double theta_j) {
  if (target <= 0.0) return 0.0;
  double lo = 0.0;
  double hi = 0.5;
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (rate_g(0.5, mid, theta_best, theta_j).value >= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

GammaSolution solve_gamma_star(const Instance& instance, double tol) {
  const std::size_t k = instance.k();
  const std::size_t best = instance.best_arm();
  std::vector<std::size_t> others;
  for (std::size_t d = 0; d < k; ++d) {
    if (d != best) others.push_back(d);
  }
  const double theta_best = instance.best_value();
  auto g = [&](std::size_t d, double share) {
    return rate_g(0.5, share, theta_best, instance.theta(d)).value;
  };

  GammaSolution solution;
  solution.rho.assign(k, 0.0);
  solution.rho[best] = 0.5;

  if (others.size() == 1) {
    // The constraints leave no freedom: rho = (1/2, 1/2).
    solution.rho[others[0]] = 0.5;
    solution.gamma_star = g(others[0], 0.5);
    solution.residuals.push_back({others[0], 0.0});
    return solution;
  }

  auto total_share = [&](double target) {
    double total = 0.0;
    for (std::size_t d : others) total += share_needed(target, theta_best, instance.theta(d));
    return total;
  };

  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t d : others) hi = std::min(hi, g(d, 0.5));
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (total_share(mid) <= 0.5)
      lo = mid;
    else
      hi = mid;
  }

  double total = 0.0;
  for (std::size_t d : others) {
    solution.rho[d] = share_needed(lo, theta_best, instance.theta(d));
    total += solution.rho[d];
  }
  if (total > 0.0) {
    // Spread the bracket slack proportionally so the shares sum to 1/2.
    const double scale = 0.5 / total;
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < others.size(); ++i) {
      solution.rho[others[i]] *= scale;
      partial += solution.rho[others[i]];
    }
    solution.rho[others.back()] = std::max(0.0, 0.5 - partial);
  } else {
    for (std::size_t d : others) solution.rho[d] = 0.5 / static_cast<double>(others.size());
  }

  solution.gamma_star = std::numeric_limits<double>::infinity();
  std::vector<double> rates;
  for (std::size_t d : others) {
    rates.push_back(g(d, solution.rho[d]));
    solution.gamma_star = std::min(solution.gamma_star, rates.back());
  }
  for (std::size_t i = 0; i < others.size(); ++i)
    solution.residuals.push_back({others[i], rates[i] - solution.gamma_star});
  return solution;
}

double complexity_h(const Instance& instance) {
  double h = 0.0;
  for (std::size_t d = 0; d < instance.k(); ++d) {
    if (d == instance.best_arm()) continue;
    const double gap = instance.gap(d);
    h += 1.0 / (gap * gap);
  }
  return h;
}

double pinsker_bound(const Instance& instance) { return 1.0 / (4.0 * complexity_h(instance)); }

double cl_regret_bound(std::size_t k, std::int64_t horizon, double h) {
  if (k < 2) throw Error(ErrorCode::invalid_argument, "the lower bound needs k >= 2");
  if (horizon < 1) throw Error(ErrorCode::invalid_argument, "the lower bound needs T >= 1");
  if (!(h > 0.0)) throw Error(ErrorCode::invalid_argument, "the lower bound needs H > 0");
  const auto kd = static_cast<double>(k);
  const auto t = static_cast<double>(horizon);
  return -std::log(6.0 * kd) - kLowerBoundConstant * t / (std::log(kd) * h) +
         2.0 * std::sqrt(t * std::log(6.0 * t * kd));
}

ComplexityReport bound_report(const Instance& instance, std::int64_t horizon) {
  ComplexityReport report;
  report.k = instance.k();
  report.horizon = horizon;
  report.h = complexity_h(instance);
  report.pinsker_bound = 1.0 / (4.0 * report.h);
  report.gamma_star = solve_gamma_star(instance).gamma_star;
  report.cl_bound_log = cl_regret_bound(report.k, horizon, report.h);
  const double log_k = std::log(static_cast<double>(report.k));
  report.kasy_rate = report.gamma_star;
  report.capped_rate = kRateCapConstant / log_k * report.gamma_star;
  report.lower_bound_rate = kLowerBoundConstant / (log_k * report.h);
  report.exponent_ratio = log_k / kRateCapConstant;
  report.cap_exceeds_claim = kRateCapConstant / log_k > 1.0;
  return report;
}

}  // namespace bailab
