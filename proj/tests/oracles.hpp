#pragma once

// Independent reference computations used only by tests. None of these call
// into the library code they are used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace bailab::oracle {

using high_precision = boost::multiprecision::cpp_bin_float_50;

inline double kl_high_precision(double p_in, double q_in) {
  const high_precision p(p_in), q(q_in), one(1);
  high_precision value = 0;
  if (p > 0) value += p * log(p / q);
  if (p < one) value += (one - p) * log((one - p) / (one - q));
  return static_cast<double>(value);
}

inline double kl_plain(double p, double q) {
  double v = 0.0;
  if (p > 0.0) v += p * std::log(p / q);
  if (p < 1.0) v += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return v;
}

struct Minimum {
  double x;
  double value;
};

// Golden-section search for a unimodal function on [a, b].
inline Minimum golden_section(const std::function<double(double)>& f, double a, double b,
                              double tol = 1e-12) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

inline Minimum rate_by_golden_section(double rho1, double rhoj, double theta1, double thetaj) {
  return golden_section(
      [&](double x) { return rho1 * kl_plain(x, theta1) + rhoj * kl_plain(x, thetaj); }, thetaj,
      theta1);
}

// Grid search for the rate program with the best share fixed at 1/2:
// suboptimal shares on a grid of `rho_step` summing to 1/2, each G_j by
// minimizing over an x grid of `x_step` on [theta_j, theta_best].
inline double gamma_grid_search(const std::vector<double>& theta, double rho_step = 1e-3,
                                double x_step = 1e-4) {
  const auto best = static_cast<std::size_t>(
      std::max_element(theta.begin(), theta.end()) - theta.begin());
  std::vector<double> others;
  for (std::size_t d = 0; d < theta.size(); ++d) {
    if (d != best) others.push_back(theta[d]);
  }
  const double t1 = theta[best];
  const int units = static_cast<int>(std::lround(0.5 / rho_step));

  // table[j][u] = G_j(1/2, u * rho_step)
  std::vector<std::vector<double>> table(others.size(), std::vector<double>(units + 1));
  for (std::size_t j = 0; j < others.size(); ++j) {
    const double tj = others[j];
    const int steps = static_cast<int>(std::ceil((t1 - tj) / x_step));
    std::vector<double> kl1(steps + 1), klj(steps + 1);
    for (int i = 0; i <= steps; ++i) {
      const double x = std::min(t1, tj + i * x_step);
      kl1[i] = kl_plain(x, t1);
      klj[i] = kl_plain(x, tj);
    }
    for (int u = 0; u <= units; ++u) {
      const double rho = u * rho_step;
      double best_value = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= steps; ++i) best_value = std::min(best_value, 0.5 * kl1[i] + rho * klj[i]);
      table[j][u] = best_value;
    }
  }

  double best_gamma = 0.0;
  std::vector<int> alloc(others.size(), 0);
  std::function<void(std::size_t, int)> visit = [&](std::size_t j, int remaining) {
    if (j + 1 == others.size()) {
      alloc[j] = remaining;
      double g = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < others.size(); ++i) g = std::min(g, table[i][alloc[i]]);
      best_gamma = std::max(best_gamma, g);
      return;
    }
    for (int u = 0; u <= remaining; ++u) {
      alloc[j] = u;
      visit(j + 1, remaining - u);
    }
  };
  visit(0, units);
  return best_gamma;
}

// Composite Simpson on [a, b] with `panels` (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

inline double beta_density(double x, double a, double b) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) + std::lgamma(a + b) -
                  std::lgamma(a) - std::lgamma(b));
}

inline double binomial_pmf(int n, int s, double p) {
  long double c = 1.0L;
  for (int i = 1; i <= s; ++i) c = c * (n - s + i) / i;
  return static_cast<double>(c * std::pow(static_cast<long double>(p), s) *
                             std::pow(1.0L - p, n - s));
}

// Errors of a two-arm experiment with fixed equal allocation m per arm and a
// uniform prior: arm 2 is chosen exactly when r2 > r1 (ties go to arm 1).
inline double equal_split_error(int m, double theta1, double theta2) {
  double p = 0.0;
  for (int r1 = 0; r1 <= m; ++r1) {
    for (int r2 = r1 + 1; r2 <= m; ++r2)
      p += binomial_pmf(m, r1, theta1) * binomial_pmf(m, r2, theta2);
  }
  return p;
}

// Forward enumeration of every (m, r) reachable in exactly t waves.
inline std::vector<std::size_t> count_states_by_search(std::size_t k, int wave_size, int horizon) {
  using State = std::pair<std::vector<int>, std::vector<int>>;
  std::set<State> frontier{{std::vector<int>(k, 0), std::vector<int>(k, 0)}};
  std::vector<std::size_t> counts{frontier.size()};
  for (int t = 0; t < horizon; ++t) {
    std::set<State> next;
    for (const auto& [m, r] : frontier) {
      // every way to place wave_size subjects one at a time, then every outcome
      std::set<std::vector<int>> placements{std::vector<int>(k, 0)};
      for (int i = 0; i < wave_size; ++i) {
        std::set<std::vector<int>> grown;
        for (auto n : placements) {
          for (std::size_t d = 0; d < k; ++d) {
            auto g = n;
            ++g[d];
            grown.insert(g);
          }
        }
        placements = std::move(grown);
      }
      for (const auto& n : placements) {
        std::vector<int> s(k, 0);
        for (;;) {
          std::vector<int> m2 = m, r2 = r;
          for (std::size_t d = 0; d < k; ++d) {
            m2[d] += n[d];
            r2[d] += s[d];
          }
          next.insert({m2, r2});
          std::size_t d = 0;
          while (d < k && s[d] == n[d]) s[d++] = 0;
          if (d == k) break;
          ++s[d];
        }
      }
    }
    frontier = std::move(next);
    counts.push_back(frontier.size());
  }
  return counts;
}

}  // namespace bailab::oracle
