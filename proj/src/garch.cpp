#include "volclust/garch.hpp"

#include <cmath>
#include <limits>
#include <algorithm>

#include "volclust/error.hpp"
#include "volclust/nelder_mead.hpp"
#include "volclust/stats.hpp"

namespace volclust {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// Likelihood without allocation; +inf when the variance path breaks down.
double raw_neg_log_likelihood(double omega, double alpha, double beta, std::span<const double> r,
                              double presample) {
  double s2 = omega + (alpha + beta) * presample;
  double prev_r2 = 0.0;
  double sum = 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    if (t > 0) s2 = omega + alpha * prev_r2 + beta * s2;
    if (!(s2 > 0.0) || !std::isfinite(s2)) return std::numeric_limits<double>::infinity();
    const double r2 = r[t] * r[t];
    sum += kLog2Pi + std::log(s2) + r2 / s2;
    prev_r2 = r2;
  }
  return 0.5 * sum;
}

struct Unconstrained {
  double omega;
  double alpha;
  double beta;
};

Unconstrained from_unconstrained(const std::vector<double>& u) {
  const double omega = std::exp(u[0]);
  const double persistence = logistic(u[1]);
  const double share = logistic(u[2]);
  return {omega, persistence * share, persistence * (1.0 - share)};
}

std::vector<double> to_unconstrained(const GarchParams& p) {
  const double persistence = p.alpha() + p.beta();
  // Keep the start strictly inside the simplex so the logits are finite.
  const double pc = std::clamp(persistence, 1e-6, 1.0 - 1e-6);
  const double share = persistence > 0.0 ? std::clamp(p.alpha() / persistence, 1e-6, 1.0 - 1e-6) : 0.5;
  return {std::log(p.omega()), logit(pc), logit(share)};
}

}  // namespace

GarchParams::GarchParams(double omega, double alpha, double beta) : omega_(omega), alpha_(alpha), beta_(beta) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ValidationError("GARCH omega must be positive");
  if (!(alpha >= 0.0) || !(beta >= 0.0)) throw ValidationError("GARCH alpha and beta must be non-negative");
  if (!(alpha + beta < 1.0)) throw ValidationError("GARCH alpha + beta must be below 1 (stationarity)");
}

ReturnSeries simulate(const GarchParams& params, std::size_t n, Seed seed) {
  if (n < 2) throw ValidationError("simulation length must be at least 2");
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(n);
  double s2 = params.unconditional_variance();
  double prev = 0.0;
  for (std::size_t t = 0; t < n + kGarchBurnIn; ++t) {
    if (t > 0) s2 = params.omega() + params.alpha() * prev * prev + params.beta() * s2;
    prev = std::sqrt(s2) * rng.normal();
    if (t >= kGarchBurnIn) out.push_back(prev);
  }
  return ReturnSeries(std::move(out));
}

std::vector<double> conditional_variances(const GarchParams& params, std::span<const double> r) {
  std::vector<double> s2(r.size());
  if (r.empty()) return s2;
  const double presample = sample_variance(r);
  s2[0] = params.omega() + (params.alpha() + params.beta()) * presample;
  for (std::size_t t = 1; t < r.size(); ++t) {
    s2[t] = params.omega() + params.alpha() * r[t - 1] * r[t - 1] + params.beta() * s2[t - 1];
  }
  return s2;
}

double neg_log_likelihood(std::span<const double> r, std::span<const double> variances) {
  if (r.size() != variances.size()) throw ValidationError("return and variance lengths differ");
  double sum = 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    sum += kLog2Pi + std::log(variances[t]) + r[t] * r[t] / variances[t];
  }
  if (!std::isfinite(sum)) throw NumericError("negative log-likelihood is not finite");
  return 0.5 * sum;
}

double neg_log_likelihood(const GarchParams& params, const ReturnSeries& r) {
  if (r.size() < 2) throw ValidationError("likelihood needs at least 2 returns");
  const double v = raw_neg_log_likelihood(params.omega(), params.alpha(), params.beta(), r.values(),
                                          sample_variance(r.values()));
  if (!std::isfinite(v)) throw NumericError("negative log-likelihood is not finite");
  return v;
}

GarchFit fit(const ReturnSeries& r, std::optional<GarchParams> initial) {
  if (r.size() < kGarchMinFitLength) {
    throw ValidationError("GARCH fit needs at least " + std::to_string(kGarchMinFitLength) + " returns, got " +
                          std::to_string(r.size()));
  }
  const double var = sample_variance(r.values());
  if (!(var > 0.0)) throw ValidationError("cannot fit GARCH to a zero-variance series");
  const GarchParams start = initial.value_or(GarchParams(0.1 * var, 0.05, 0.90));

  auto objective = [&](const std::vector<double>& u) {
    const auto p = from_unconstrained(u);
    if (!(p.omega > 0.0) || !(p.alpha + p.beta < 1.0)) return std::numeric_limits<double>::infinity();
    return raw_neg_log_likelihood(p.omega, p.alpha, p.beta, r.values(), var);
  };

  // A second pass from the first optimum re-expands the simplex, which guards
  // against premature collapse along the flat alpha/beta ridge.
  NelderMeadOptions options;
  options.initial_step = 0.5;
  auto first = nelder_mead(objective, to_unconstrained(start), options);
  options.initial_step = 0.1;
  auto second = nelder_mead(objective, first.x, options);
  const auto& best = second.value <= first.value ? second : first;

  const auto u = from_unconstrained(best.x);
  GarchParams params(u.omega, u.alpha, u.beta);
  auto variances = conditional_variances(params, r.values());
  const double nll = neg_log_likelihood(r.values(), variances);
  return GarchFit{params, -nll, std::move(variances), first.converged && second.converged,
                  first.iterations + second.iterations};
}

ReturnSeries filter(const ReturnSeries& r, const GarchFit& fit) {
  if (r.size() != fit.conditional_variances.size()) {
    throw ValidationError("series length " + std::to_string(r.size()) + " does not match fit length " +
                          std::to_string(fit.conditional_variances.size()));
  }
  std::vector<double> out(r.size());
  for (std::size_t t = 0; t < r.size(); ++t) out[t] = r[t] / std::sqrt(fit.conditional_variances[t]);
  return ReturnSeries(std::move(out));
}

}  // namespace volclust
