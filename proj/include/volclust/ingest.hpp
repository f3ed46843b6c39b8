#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace volclust {

/// Ordered price observations. Timestamps are opaque ordering keys: when every
/// key in the series is a base-10 integer they are compared numerically,
/// otherwise lexically.
class PriceSeries {
 public:
  /// Throws ValidationError unless prices are positive and finite, timestamps
  /// strictly increase, and there are at least two observations.
  PriceSeries(std::vector<std::string> timestamps, std::vector<double> prices);

  std::size_t size() const noexcept { return prices_.size(); }
  const std::vector<std::string>& timestamps() const noexcept { return timestamps_; }
  const std::vector<double>& prices() const noexcept { return prices_; }

 private:
  std::vector<std::string> timestamps_;
  std::vector<double> prices_;
};

/// A series of returns with cached sample mean and (n-1) standard deviation.
class ReturnSeries {
 public:
  ReturnSeries() = default;
  explicit ReturnSeries(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double mean() const noexcept { return mean_; }
  double stdev() const noexcept { return stdev_; }

  friend bool operator==(const ReturnSeries& a, const ReturnSeries& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<double> values_;
  double mean_ = 0.0;
  double stdev_ = 0.0;
};

/// Parses `timestamp,price` CSV text. Errors name the 1-based line number.
PriceSeries load_prices(std::istream& in);
PriceSeries load_prices(const std::filesystem::path& path);

/// r[i] = ln p[i+1] - ln p[i].
ReturnSeries compute_returns(const PriceSeries& prices);

/// Affine map to sample mean 0 and sample stdev 1. Throws on zero variance.
ReturnSeries standardize(const ReturnSeries& r);

}  // namespace volclust
