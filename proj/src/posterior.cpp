#include "bailab/posterior.hpp"

#include <cmath>
#include <numeric>

#include "bailab/errors.hpp"
#include "bailab/numerics.hpp"

namespace bailab {

BetaPosterior::BetaPosterior(std::vector<double> alpha, std::vector<double> beta)
    : alpha_(std::move(alpha)), beta_(std::move(beta)) {
  if (alpha_.empty() || alpha_.size() != beta_.size())
    throw Error(ErrorCode::invalid_argument,
                "alpha and beta must be non-empty and of equal length");
  for (std::size_t d = 0; d < alpha_.size(); ++d) {
    if (!(alpha_[d] > 0.0) || !(beta_[d] > 0.0))
      throw Error(ErrorCode::invalid_argument, "Beta parameters must be positive");
  }
}

BetaPosterior update_posterior(const BetaPosterior& prior, const SufficientStats& stats) {
  stats.validate();
  if (stats.k() != prior.k())
    throw Error(ErrorCode::invalid_argument, "stats and prior disagree on arm count");
  std::vector<double> alpha(prior.k());
  std::vector<double> beta(prior.k());
  for (std::size_t d = 0; d < prior.k(); ++d) {
    alpha[d] = prior.alpha(d) + static_cast<double>(stats.r[d]);
    beta[d] = prior.beta(d) + static_cast<double>(stats.m[d] - stats.r[d]);
  }
  return BetaPosterior(std::move(alpha), std::move(beta));
}

double posterior_mean(const BetaPosterior& post, std::size_t d) {
  return post.alpha(d) / (post.alpha(d) + post.beta(d));
}

double log_beta_binomial_pmf(double alpha, double beta, std::int64_t n, std::int64_t s) {
  if (n < 0 || s < 0 || s > n)
    throw Error(ErrorCode::invalid_argument, "Beta-Binomial needs 0 <= s <= n");
  const auto sd = static_cast<double>(s);
  const auto fd = static_cast<double>(n - s);
  return numerics::log_choose(n, s) + numerics::log_beta(alpha + sd, beta + fd) -
         numerics::log_beta(alpha, beta);
}

double beta_binomial_pmf(double alpha, double beta, std::int64_t n, std::int64_t s) {
  return std::exp(log_beta_binomial_pmf(alpha, beta, n, s));
}

std::vector<double> prob_best(const BetaPosterior& post, std::int64_t draws,
                              RandomStream& stream) {
  if (draws < 1) throw Error(ErrorCode::invalid_argument, "draws must be >= 1");
  const std::size_t k = post.k();
  std::vector<std::int64_t> wins(k, 0);
  for (std::int64_t i = 0; i < draws; ++i) {
    std::size_t best = 0;
    double best_value = stream.beta(post.alpha(0), post.beta(0));
    for (std::size_t d = 1; d < k; ++d) {
      const double v = stream.beta(post.alpha(d), post.beta(d));
      if (v > best_value) {
        best_value = v;
        best = d;
      }
    }
    ++wins[best];
  }

  std::vector<double> p(k);
  const auto total = static_cast<double>(draws);
  std::size_t last = 0;
  for (std::size_t d = 0; d < k; ++d) {
    p[d] = static_cast<double>(wins[d]) / total;
    if (wins[d] > 0) last = d;
  }
  // Quotients can leave the sum an ulp away from one. The last arm with any
  // wins takes 1 minus the partial sum before it; that difference is exact or
  // within half an ulp, so adding it back in index order gives exactly 1.
  double partial = 0.0;
  for (std::size_t d = 0; d < last; ++d) partial += p[d];
  p[last] = 1.0 - partial;
  return p;
}

double prob_best_exact_2arm(const BetaPosterior& post) {
  if (post.k() != 2)
    throw Error(ErrorCode::invalid_argument, "exact probability-of-best needs k == 2");
  const double a1 = post.alpha(0), b1 = post.beta(0);
  const double a2 = post.alpha(1), b2 = post.beta(1);
  auto breaks = numerics::beta_breakpoints(a1, b1);
  auto more = numerics::beta_breakpoints(a2, b2);
  breaks.insert(breaks.end(), more.begin(), more.end());
  return numerics::integrate_unit(
      [&](double x) { return numerics::beta_pdf(x, a1, b1) * numerics::beta_cdf(x, a2, b2); },
      std::move(breaks));
}

double expected_max_theta(const BetaPosterior& post) {
  std::vector<double> breaks;
  for (std::size_t d = 0; d < post.k(); ++d) {
    auto b = numerics::beta_breakpoints(post.alpha(d), post.beta(d));
    breaks.insert(breaks.end(), b.begin(), b.end());
  }
  return numerics::integrate_unit(
      [&](double x) {
        // 1 - prod(1 - sf_d), kept accurate where every cdf is near one
        double log_product = 0.0;
        for (std::size_t d = 0; d < post.k(); ++d)
          log_product += std::log1p(-numerics::beta_sf(x, post.alpha(d), post.beta(d)));
        return -std::expm1(log_product);
      },
      std::move(breaks));
}

}  // namespace bailab
