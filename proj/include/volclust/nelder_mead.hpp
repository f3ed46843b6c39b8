#pragma once

#include <functional>
#include <vector>

namespace volclust {

struct NelderMeadOptions {
  double initial_step = 0.1;  // simplex edge length along each coordinate
  double rel_tolerance = 1e-8;
  int max_iterations = 2000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Unconstrained Nelder-Mead minimization with standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
///
/// Stops when (f_worst - f_best) <= rel_tolerance * max(|f_best|, 1e-300)
/// or after max_iterations. Non-finite objective values are treated as +inf.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, const NelderMeadOptions& options = {});

}  // namespace volclust
