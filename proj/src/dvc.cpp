#include "volclust/dvc.hpp"

#include <cmath>
#include <span>
#include <string>

#include "volclust/error.hpp"

namespace volclust {
namespace {

struct LineFit {
  double slope;
  double intercept;
};

// Ordinary least squares y = a + b x over the given points.
LineFit least_squares(std::span<const ProfilePoint> pts) {
  const auto n = static_cast<double>(pts.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : pts) {
    mx += p.s_value;
    my += p.abs_mean;
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& p : pts) {
    const double dx = p.s_value - mx;
    sxy += dx * (p.abs_mean - my);
    sxx += dx * dx;
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

template <typename F>
auto run_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const NumericError& e) {
    throw PipelineError(stage, e.what(), true);
  } catch (const ValidationError& e) {
    throw PipelineError(stage, e.what(), false);
  }
}

}  // namespace

void AnalysisConfig::validate() const {
  if (n_bins < 3 || n_bins % 2 == 0) {
    throw ValidationError("n_bins must be odd and at least 3, got " + std::to_string(n_bins));
  }
  if (!(clip_sigmas > 0.0) || !std::isfinite(clip_sigmas)) throw ValidationError("clip_sigmas must be positive");
  if (min_count < 1) throw ValidationError("min_count must be at least 1");
}

TransitionCounts::TransitionCounts(const SymbolicSeries& s)
    : n_(s.scheme().n_bins()),
      counts_(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0),
      totals_(static_cast<std::size_t>(n_), 0) {
  const auto& idx = s.indices();
  for (std::size_t t = 0; t + 1 < idx.size(); ++t) {
    ++counts_[index(idx[t], idx[t + 1])];
    ++totals_[static_cast<std::size_t>(idx[t])];
  }
}

ConditionalDistribution conditional_distribution(const TransitionCounts& counts, Symbol conditioning_symbol) {
  if (conditioning_symbol < 0 || conditioning_symbol >= counts.n_symbols()) {
    throw ValidationError("conditioning symbol " + std::to_string(conditioning_symbol) + " out of range");
  }
  ConditionalDistribution d;
  d.conditioning_symbol = conditioning_symbol;
  d.support_count = counts.row_total(conditioning_symbol);
  if (d.support_count == 0) return d;
  const auto total = static_cast<double>(d.support_count);
  for (Symbol j = 0; j < counts.n_symbols(); ++j) {
    if (const auto c = counts.count(conditioning_symbol, j); c > 0) {
      d.probabilities.emplace(j, static_cast<double>(c) / total);
    }
  }
  return d;
}

ConditionalDistribution conditional_distribution(const SymbolicSeries& s, Symbol conditioning_symbol) {
  if (!s.scheme().valid(conditioning_symbol)) {
    throw ValidationError("conditioning symbol " + std::to_string(conditioning_symbol) + " out of range");
  }
  std::map<Symbol, std::int64_t> successors;
  std::int64_t support = 0;
  const auto& idx = s.indices();
  for (std::size_t t = 0; t + 1 < idx.size(); ++t) {
    if (idx[t] == conditioning_symbol) {
      ++successors[idx[t + 1]];
      ++support;
    }
  }
  ConditionalDistribution d;
  d.conditioning_symbol = conditioning_symbol;
  d.support_count = support;
  for (const auto& [j, c] : successors) {
    d.probabilities.emplace(j, static_cast<double>(c) / static_cast<double>(support));
  }
  return d;
}

double conditional_abs_mean(const ConditionalDistribution& d, const BinningScheme& scheme) {
  if (d.support_count <= 0 || d.probabilities.empty()) {
    throw ValidationError("conditional distribution of symbol " + std::to_string(d.conditioning_symbol) +
                          " is empty");
  }
  double sum = 0.0;
  for (const auto& [j, p] : d.probabilities) sum += std::abs(symbol_value(scheme, j)) * p;
  return sum;
}

DvcProfile dvc_profile(const SymbolicSeries& s, std::int64_t min_count) {
  if (min_count < 1) throw ValidationError("min_count must be at least 1");
  const TransitionCounts counts(s);
  DvcProfile profile;
  for (Symbol i = 0; i < counts.n_symbols(); ++i) {
    if (counts.row_total(i) < min_count) continue;
    const auto d = conditional_distribution(counts, i);
    profile.points.push_back({symbol_value(s.scheme(), i), conditional_abs_mean(d, s.scheme()), d.support_count});
  }
  if (profile.points.empty()) {
    throw ValidationError("no symbol has at least " + std::to_string(min_count) +
                          " transitions; series too short or bins too fine");
  }
  return profile;
}

DvcResult fit_dvc(const DvcProfile& profile) {
  std::vector<ProfilePoint> pos;
  std::vector<ProfilePoint> neg;
  for (const auto& p : profile.points) (p.s_value >= 0.0 ? pos : neg).push_back(p);
  if (pos.size() < 2 || neg.size() < 2) {
    throw ValidationError("slope fit needs 2 points per side, have " + std::to_string(pos.size()) +
                          " with s >= 0 and " + std::to_string(neg.size()) + " with s < 0");
  }
  const auto fp = least_squares(pos);
  const auto fn = least_squares(neg);
  if (!std::isfinite(fp.slope) || !std::isfinite(fn.slope)) throw NumericError("non-finite slope");

  DvcResult result;
  result.dvc_p = fp.slope;
  result.intercept_p = fp.intercept;
  result.dvc_n = fn.slope;
  result.intercept_n = fn.intercept;
  result.profile = profile;
  result.n_points_pos = static_cast<std::int64_t>(pos.size());
  result.n_points_neg = static_cast<std::int64_t>(neg.size());
  return result;
}

DvcResult analyze(const ReturnSeries& r, const AnalysisConfig& config) {
  run_stage("config", [&] { config.validate(); });
  const ReturnSeries input = config.standardize_first ? run_stage("standardize", [&] { return standardize(r); }) : r;
  const auto scheme = run_stage("build_bins", [&] { return build_bins(input, config.n_bins, config.clip_sigmas); });
  const auto symbols = run_stage("symbolize", [&] { return symbolize(input, scheme); });
  const auto profile = run_stage("dvc_profile", [&] { return dvc_profile(symbols, config.min_count); });
  auto result = run_stage("fit_dvc", [&] { return fit_dvc(profile); });
  result.config = config;
  return result;
}

}  // namespace volclust
