#include "volclust/surrogate.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "volclust/error.hpp"

namespace volclust {

ReturnSeries shuffle(const ReturnSeries& r, Seed seed) {
  if (r.empty()) throw ValidationError("cannot shuffle an empty series");
  std::vector<double> v(r.values().begin(), r.values().end());
  Rng rng(seed);
  for (std::size_t i = v.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(v[i], v[j]);
  }
  return ReturnSeries(std::move(v));
}

ReturnSeries iid_gaussian(std::size_t n, double sigma, Seed seed) {
  if (n < 2) throw ValidationError("iid series length must be at least 2");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be positive");
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = sigma * rng.normal();
  return ReturnSeries(std::move(v));
}

}  // namespace volclust
