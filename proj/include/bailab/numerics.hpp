#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace bailab::numerics {

inline constexpr double kQuadratureTolerance = 1e-10;

double log_beta(double a, double b);
double log_choose(std::int64_t n, std::int64_t k);

double logit(double p);
double logistic(double x);

double beta_pdf(double x, double a, double b);
// Regularized incomplete beta I_x(a, b).
double beta_cdf(double x, double a, double b);
// Upper tail 1 - I_x(a, b) without cancellation.
double beta_sf(double x, double a, double b);

// Points where a Beta(a, b) density changes scale: the mean and a few
// standard deviations either side, clipped to (0, 1).
std::vector<double> beta_breakpoints(double a, double b);

// Adaptive Gauss-Kronrod over [0, 1], split at the given interior
// breakpoints so narrow peaks are never straddled by a single panel.
double integrate_unit(const std::function<double(double)>& f,
                      std::vector<double> breakpoints,
                      double tolerance = kQuadratureTolerance);

}  // namespace bailab::numerics
