#pragma once

#include <span>
#include <vector>

#include "volclust/ingest.hpp"

namespace volclust {

using Symbol = int;

/// Partition of the return axis into an odd number of contiguous bins.
///
/// Bin i covers [edges[i], edges[i+1]); values below the first edge fall in
/// bin 0 and values at or above the last edge fall in the last bin, so every
/// finite value has exactly one symbol. A value exactly on an inner edge
/// belongs to the higher bin. The numeric value of a symbol is its bin center.
class BinningScheme {
 public:
  /// Throws ValidationError unless edges has an odd count of at least four
  /// strictly increasing finite values.
  explicit BinningScheme(std::vector<double> edges);

  int n_bins() const noexcept { return static_cast<int>(centers_.size()); }
  const std::vector<double>& edges() const noexcept { return edges_; }
  const std::vector<double>& centers() const noexcept { return centers_; }

  Symbol symbol_of(double value) const;
  bool valid(Symbol s) const noexcept { return s >= 0 && s < n_bins(); }

  friend bool operator==(const BinningScheme&, const BinningScheme&) = default;

 private:
  std::vector<double> edges_;
  std::vector<double> centers_;
};

/// One symbol per return, tied to the scheme that produced it.
class SymbolicSeries {
 public:
  SymbolicSeries(std::vector<Symbol> indices, BinningScheme scheme);

  std::size_t size() const noexcept { return indices_.size(); }
  const std::vector<Symbol>& indices() const noexcept { return indices_; }
  const BinningScheme& scheme() const noexcept { return scheme_; }

 private:
  std::vector<Symbol> indices_;
  BinningScheme scheme_;
};

/// Equal-width bins over mean +/- clip_sigmas * stdev of r.
BinningScheme build_bins(const ReturnSeries& r, int n_bins, double clip_sigmas);

SymbolicSeries symbolize(const ReturnSeries& r, const BinningScheme& scheme);

double symbol_value(const BinningScheme& scheme, Symbol index);

}  // namespace volclust
