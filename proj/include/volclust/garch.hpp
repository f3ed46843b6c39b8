#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "volclust/ingest.hpp"
#include "volclust/random.hpp"

namespace volclust {

/// GARCH(1,1) parameters: s2[t] = omega + alpha * r[t-1]^2 + beta * s2[t-1].
/// Construction enforces omega > 0, alpha >= 0, beta >= 0 and alpha + beta < 1.
class GarchParams {
 public:
  GarchParams(double omega, double alpha, double beta);

  double omega() const noexcept { return omega_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double unconditional_variance() const noexcept { return omega_ / (1.0 - alpha_ - beta_); }

  friend bool operator==(const GarchParams&, const GarchParams&) = default;

 private:
  double omega_;
  double alpha_;
  double beta_;
};

struct GarchFit {
  GarchParams params;
  double log_likelihood;
  std::vector<double> conditional_variances;
  bool converged;
  int iterations;
};

inline constexpr std::size_t kGarchBurnIn = 1000;
inline constexpr std::size_t kGarchMinFitLength = 500;

/// n returns with Gaussian innovations. The variance starts at its
/// unconditional value and the first kGarchBurnIn steps are discarded.
ReturnSeries simulate(const GarchParams& params, std::size_t n, Seed seed);

/// Conditional variance path of r under params. The pre-sample squared return
/// and variance are both set to the sample variance of r.
std::vector<double> conditional_variances(const GarchParams& params, std::span<const double> r);

/// 0.5 * sum(ln 2pi + ln s2[t] + r[t]^2 / s2[t]). Throws NumericError if a term
/// is not finite.
double neg_log_likelihood(const GarchParams& params, const ReturnSeries& r);

/// Same sum evaluated from a stored variance path.
double neg_log_likelihood(std::span<const double> r, std::span<const double> variances);

/// Gaussian maximum likelihood by Nelder-Mead over (log omega, logit of
/// alpha + beta, logit of alpha / (alpha + beta)). Default start is
/// omega = 0.1 * sample variance, alpha = 0.05, beta = 0.90.
GarchFit fit(const ReturnSeries& r, std::optional<GarchParams> initial = std::nullopt);

/// r[t] / sqrt(s2[t]) using the fitted variance path.
ReturnSeries filter(const ReturnSeries& r, const GarchFit& fit);

}  // namespace volclust
