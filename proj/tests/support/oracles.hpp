#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the library code paths being checked.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

// Bin of x by linear scan: last edge <= x, clamped to the outer bins.
inline int linear_bin(const std::vector<double>& edges, double x) {
  const int n = static_cast<int>(edges.size()) - 1;
  if (x < edges[1]) return 0;
  for (int i = n - 1; i >= 1; --i) {
    if (x >= edges[static_cast<std::size_t>(i)]) return i;
  }
  return 0;
}

// counts[i][j] = number of t with s[t] = i and s[t+1] = j.
inline std::vector<std::vector<std::int64_t>> transition_matrix(const std::vector<int>& s, int n_symbols) {
  std::vector<std::vector<std::int64_t>> m(static_cast<std::size_t>(n_symbols),
                                           std::vector<std::int64_t>(static_cast<std::size_t>(n_symbols), 0));
  for (std::size_t t = 1; t < s.size(); ++t) {
    m[static_cast<std::size_t>(s[t - 1])][static_cast<std::size_t>(s[t])] += 1;
  }
  return m;
}

struct Point {
  double s_value;
  double abs_mean;
  std::int64_t count;
};

// Profile points straight from a transition matrix and bin centers.
inline std::vector<Point> profile(const std::vector<std::vector<std::int64_t>>& m,
                                  const std::vector<double>& centers, std::int64_t min_count) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::int64_t total = 0;
    for (auto c : m[i]) total += c;
    if (total < min_count || total == 0) continue;
    double acc = 0.0;
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      acc += std::fabs(centers[j]) * static_cast<double>(m[i][j]) / static_cast<double>(total);
    }
    pts.push_back({centers[i], acc, total});
  }
  return pts;
}

struct Moments {
  double mean;
  double variance;  // n-1
  double excess_kurtosis;
};

inline Moments moments(const std::vector<double>& x) {
  long double s = 0;
  for (double v : x) s += v;
  const long double n = static_cast<long double>(x.size());
  const long double m = s / n;
  long double m2 = 0, m4 = 0;
  for (double v : x) {
    const long double d = v - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const long double pop_var = m2 / n;
  return {static_cast<double>(m), static_cast<double>(m2 / (n - 1)),
          static_cast<double>((m4 / n) / (pop_var * pop_var) - 3.0)};
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace oracle
