#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bailab/model.hpp"

namespace bailab {

// d_KL(Bernoulli(p) || Bernoulli(q)) in nats, with 0 log 0 = 0.
// Throws Error{invalid_argument} unless p in [0, 1] and q in (0, 1).
double bernoulli_kl(double p, double q);

struct RateMinimum {
  double value = 0.0;  // nats per subject
  double x = 0.0;      // minimizer in [theta_j, theta_best]
};

// G_j = min over x in [theta_j, theta_best] of
//   rho_best * d_KL(x, theta_best) + rho_j * d_KL(x, theta_j).
// Stationarity puts logit(x*) at the rho-weighted mean of the two logits.
// Throws Error{invalid_argument} unless theta_best > theta_j, both in (0, 1),
// and both weights are non-negative.
RateMinimum rate_g(double rho_best, double rho_j, double theta_best, double theta_j);

struct ArmResidual {
  std::size_t arm = 0;
  double residual = 0.0;  // G_j(rho_best, rho_j) - gamma_star, >= 0
};

// Optimum of: max Gamma s.t. G_j(1/2, rho_j) >= Gamma for every suboptimal j,
// sum(rho) = 1, rho_best = 1/2. Note the best-arm share is pinned at 1/2, so
// this is the optimum within that class, not the unconstrained one.
struct GammaSolution {
  double gamma_star = 0.0;
  std::vector<double> rho;              // input arm order
  std::vector<ArmResidual> residuals;   // suboptimal arms, input order
};

inline constexpr double kGammaTolerance = 1e-12;

// Nested bisection: the outer search on Gamma tests feasibility
// sum_j rho_j(Gamma) <= 1/2, where rho_j(Gamma) is the smallest share with
// G_j(1/2, rho_j) >= Gamma (found by an inner bisection run to the floating
// point floor). `tol` bounds the width of the final Gamma bracket.
GammaSolution solve_gamma_star(const Instance& instance, double tol = kGammaTolerance);

// H = sum over suboptimal d of 1 / gap_d^2.
double complexity_h(const Instance& instance);

// 1 / (4 H), a lower bound on gamma_star through Pinsker's inequality.
double pinsker_bound(const Instance& instance);

// Natural log of (1/(6k)) exp(-200 T / (log(k) H) + 2 sqrt(T log(6 T k))).
// Not clamped: for small T the bound may exceed one.
// Throws Error{invalid_argument} for k < 2, T < 1 or H <= 0.
double cl_regret_bound(std::size_t k, std::int64_t horizon, double h);

inline constexpr double kRateCapConstant = 800.0;
inline constexpr double kLowerBoundConstant = 200.0;

struct ComplexityReport {
  std::size_t k = 0;
  std::int64_t horizon = 0;
  double h = 0.0;
  double pinsker_bound = 0.0;
  double gamma_star = 0.0;
  double cl_bound_log = 0.0;
  // Exponent claimed for exploration sampling.
  double kasy_rate = 0.0;
  // (C / log k) * gamma_star with C = 800: the most any algorithm can
  // guarantee on the hard family.
  double capped_rate = 0.0;
  // 200 / (log(k) H): the raw exponent of the lower-bound inequality.
  double lower_bound_rate = 0.0;
  // kasy_rate / capped_rate = log(k) / C.
  double exponent_ratio = 0.0;
  // C / log k > 1, i.e. the cap is looser than the claimed rate itself.
  bool cap_exceeds_claim = false;
};

ComplexityReport bound_report(const Instance& instance, std::int64_t horizon);

}  // namespace bailab
