#include "volclust/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace volclust {
namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, const NelderMeadOptions& options) {
  const std::size_t dim = start.size();
  NelderMeadResult result;

  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double f = objective(x);
    return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
  };

  std::vector<Vertex> simplex;
  simplex.reserve(dim + 1);
  simplex.push_back({start, eval(start)});
  for (std::size_t i = 0; i < dim; ++i) {
    auto x = start;
    x[i] += options.initial_step;
    simplex.push_back({x, eval(x)});
  }

  auto blend = [dim](const std::vector<double>& a, const std::vector<double>& b, double t) {
    // a + t * (b - a)
    std::vector<double> out(dim);
    for (std::size_t k = 0; k < dim; ++k) out[k] = a[k] + t * (b[k] - a[k]);
    return out;
  };

  for (;;) {
    // Stable sort keeps tie order deterministic.
    std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    const double best = simplex.front().f;
    const double worst = simplex.back().f;
    if (std::isfinite(worst) &&
        worst - best <= options.rel_tolerance * std::max(std::abs(best), 1e-300)) {
      result.converged = true;
      break;
    }
    if (result.iterations >= options.max_iterations) break;
    ++result.iterations;

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t v = 0; v < dim; ++v) {
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[v].x[k];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    Vertex& w = simplex.back();
    const double second_worst = simplex[dim - 1].f;

    auto xr = blend(centroid, w.x, -1.0);
    const double fr = eval(xr);
    if (fr < best) {
      auto xe = blend(centroid, w.x, -2.0);
      const double fe = eval(xe);
      w = fe < fr ? Vertex{std::move(xe), fe} : Vertex{std::move(xr), fr};
      continue;
    }
    if (fr < second_worst) {
      w = {std::move(xr), fr};
      continue;
    }
    if (fr < w.f) {
      auto xc = blend(centroid, xr, 0.5);
      const double fc = eval(xc);
      if (fc <= fr) {
        w = {std::move(xc), fc};
        continue;
      }
    } else {
      auto xc = blend(centroid, w.x, 0.5);
      const double fc = eval(xc);
      if (fc < w.f) {
        w = {std::move(xc), fc};
        continue;
      }
    }
    for (std::size_t v = 1; v <= dim; ++v) {
      simplex[v].x = blend(simplex[0].x, simplex[v].x, 0.5);
      simplex[v].f = eval(simplex[v].x);
    }
  }

  result.x = simplex.front().x;
  result.value = simplex.front().f;
  return result;
}

}  // namespace volclust
