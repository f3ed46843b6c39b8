#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "volclust/ingest.hpp"
#include "volclust/symbolize.hpp"

namespace volclust {

struct AnalysisConfig {
  int n_bins = 41;
  double clip_sigmas = 3.0;
  std::int64_t min_count = 100;
  bool standardize_first = true;

  /// Throws ValidationError if any field is out of range.
  void validate() const;

  friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

/// Empirical distribution of the symbol that follows `conditioning_symbol`.
struct ConditionalDistribution {
  Symbol conditioning_symbol = 0;
  std::map<Symbol, double> probabilities;  // successor -> probability, nonzero entries only
  std::int64_t support_count = 0;          // transitions out of conditioning_symbol
};

/// Square matrix of one-step transition counts, row = current symbol.
class TransitionCounts {
 public:
  explicit TransitionCounts(const SymbolicSeries& s);

  int n_symbols() const noexcept { return n_; }
  std::int64_t count(Symbol from, Symbol to) const { return counts_[index(from, to)]; }
  std::int64_t row_total(Symbol from) const { return totals_[static_cast<std::size_t>(from)]; }

 private:
  std::size_t index(Symbol from, Symbol to) const {
    return static_cast<std::size_t>(from) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(to);
  }

  int n_;
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> totals_;
};

struct ProfilePoint {
  double s_value = 0.0;   // bin center of the conditioning symbol
  double abs_mean = 0.0;  // E[|successor center| given the conditioning symbol]
  std::int64_t count = 0;

  friend bool operator==(const ProfilePoint&, const ProfilePoint&) = default;
};

struct DvcProfile {
  std::vector<ProfilePoint> points;  // strictly increasing s_value

  friend bool operator==(const DvcProfile&, const DvcProfile&) = default;
};

struct DvcResult {
  double dvc_p = 0.0;        // slope over points with s_value >= 0
  double dvc_n = 0.0;        // slope over points with s_value < 0
  double intercept_p = 0.0;
  double intercept_n = 0.0;
  DvcProfile profile;
  std::int64_t n_points_pos = 0;
  std::int64_t n_points_neg = 0;
  std::optional<AnalysisConfig> config;

  friend bool operator==(const DvcResult&, const DvcResult&) = default;
};

ConditionalDistribution conditional_distribution(const SymbolicSeries& s, Symbol conditioning_symbol);
ConditionalDistribution conditional_distribution(const TransitionCounts& counts, Symbol conditioning_symbol);

/// Probability-weighted mean of |center| over successors. Throws on empty support.
double conditional_abs_mean(const ConditionalDistribution& d, const BinningScheme& scheme);

/// One point per symbol with at least min_count outgoing transitions.
/// Throws ValidationError if no symbol qualifies.
DvcProfile dvc_profile(const SymbolicSeries& s, std::int64_t min_count);

/// Least-squares line of abs_mean against s_value, fitted separately on each
/// side of zero; the slopes are the clustering degrees. Needs two points per side.
DvcResult fit_dvc(const DvcProfile& profile);

/// standardize (optional) -> build_bins -> symbolize -> dvc_profile -> fit_dvc.
/// Stage failures are rethrown as PipelineError tagged with the stage name.
DvcResult analyze(const ReturnSeries& r, const AnalysisConfig& config = {});

}  // namespace volclust
