#include "bailab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace bailab::numerics {

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double log_choose(std::int64_t n, std::int64_t k) {
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double beta_pdf(double x, double a, double b) {
  if (x <= 0.0 || x >= 1.0) {
    // Boost rejects the endpoints for shapes below one; the density is
    // unbounded there, and quadrature never samples the endpoints anyway.
    if ((x <= 0.0 && a < 1.0) || (x >= 1.0 && b < 1.0))
      return std::numeric_limits<double>::infinity();
  }
  return boost::math::pdf(boost::math::beta_distribution<double>(a, b), x);
}

double beta_cdf(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

std::vector<double> beta_breakpoints(double a, double b) {
  const double mean = a / (a + b);
  const double sd = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1.0)));
  std::vector<double> points{mean};
  for (double c : {1.0, 3.0, 6.0, 10.0}) {
    points.push_back(mean - c * sd);
    points.push_back(mean + c * sd);
  }
  return points;
}

double beta_sf(double x, double a, double b) {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  return boost::math::ibetac(a, b, x);
}

double integrate_unit(const std::function<double(double)>& f,
                      std::vector<double> breakpoints, double tolerance) {
  std::erase_if(breakpoints, [](double x) { return !(x > 0.0 && x < 1.0); });
  breakpoints.push_back(0.0);
  breakpoints.push_back(1.0);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                    breakpoints.end());

  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
  struct Panel {
    double lo, hi, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
  };
  auto evaluate = [&](double lo, double hi) {
    double error = 0.0;
    const double value = Kronrod::integrate(f, lo, hi, 0, 0.0, &error);
    return Panel{lo, hi, value, error};
  };

  // Global adaptive bisection: always split the panel with the largest error
  // estimate, until the summed error meets the tolerance relative to the whole
  // integral. A per-panel test would stall on panels where the integrand's own
  // rounding noise exceeds the tolerance.
  constexpr std::size_t kMaxPanels = 4000;
  constexpr double kAbsoluteFloor = 1e-15;
  std::priority_queue<Panel> panels;
  double value = 0.0, error = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const auto p = evaluate(breakpoints[i], breakpoints[i + 1]);
    value += p.value;
    error += p.error;
    panels.push(p);
  }
  while (error > std::max(tolerance * std::abs(value), kAbsoluteFloor) &&
         panels.size() < kMaxPanels) {
    const Panel worst = panels.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break;
    panels.pop();
    const auto left = evaluate(worst.lo, mid);
    const auto right = evaluate(mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  // re-sum to drop the drift of the running updates
  value = 0.0;
  while (!panels.empty()) {
    value += panels.top().value;
    panels.pop();
  }
  return value;
}

}  // namespace bailab::numerics
