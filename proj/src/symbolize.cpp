#include "volclust/symbolize.hpp"

#include <algorithm>
#include <cmath>

#include "volclust/error.hpp"

namespace volclust {

BinningScheme::BinningScheme(std::vector<double> edges) : edges_(std::move(edges)) {
  const auto n = static_cast<int>(edges_.size()) - 1;
  if (n < 3 || n % 2 == 0) {
    throw ValidationError("bin count must be odd and at least 3, got " + std::to_string(n));
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!std::isfinite(edges_[i])) throw ValidationError("bin edges must be finite");
    if (i > 0 && !(edges_[i] > edges_[i - 1])) throw ValidationError("bin edges must strictly increase");
  }
  centers_.resize(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < centers_.size(); ++i) centers_[i] = (edges_[i] + edges_[i + 1]) / 2.0;
}

Symbol BinningScheme::symbol_of(double value) const {
  if (std::isnan(value)) throw ValidationError("cannot symbolize NaN");
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), value);
  const auto pos = static_cast<int>(it - edges_.begin()) - 1;
  return std::clamp(pos, 0, n_bins() - 1);
}

SymbolicSeries::SymbolicSeries(std::vector<Symbol> indices, BinningScheme scheme)
    : indices_(std::move(indices)), scheme_(std::move(scheme)) {
  for (Symbol s : indices_) {
    if (!scheme_.valid(s)) throw ValidationError("symbol " + std::to_string(s) + " outside scheme");
  }
}

BinningScheme build_bins(const ReturnSeries& r, int n_bins, double clip_sigmas) {
  if (n_bins < 3 || n_bins % 2 == 0) {
    throw ValidationError("n_bins must be odd and at least 3, got " + std::to_string(n_bins));
  }
  if (!(clip_sigmas > 0.0) || !std::isfinite(clip_sigmas)) {
    throw ValidationError("clip_sigmas must be positive");
  }
  if (!(r.stdev() > 0.0)) throw ValidationError("cannot bin a zero-variance series");

  // Edges are laid out symmetrically in standardized units, then mapped back.
  const double width = 2.0 * clip_sigmas / n_bins;
  const int half = n_bins / 2;
  std::vector<double> edges(static_cast<std::size_t>(n_bins) + 1);
  for (int i = 0; i <= n_bins; ++i) {
    const double k = (i <= half) ? -(half - i + 0.5) : (i - half - 0.5);
    const double z = i == 0 ? -clip_sigmas : (i == n_bins ? clip_sigmas : k * width);
    edges[static_cast<std::size_t>(i)] = r.mean() + r.stdev() * z;
  }
  return BinningScheme(std::move(edges));
}

SymbolicSeries symbolize(const ReturnSeries& r, const BinningScheme& scheme) {
  std::vector<Symbol> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = scheme.symbol_of(r[i]);
  return SymbolicSeries(std::move(out), scheme);
}

double symbol_value(const BinningScheme& scheme, Symbol index) {
  if (!scheme.valid(index)) {
    throw ValidationError("symbol " + std::to_string(index) + " out of range [0, " +
                          std::to_string(scheme.n_bins()) + ")");
  }
  return scheme.centers()[static_cast<std::size_t>(index)];
}

}  // namespace volclust
