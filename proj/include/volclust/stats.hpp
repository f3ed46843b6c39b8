#pragma once

#include <span>

namespace volclust {

double mean(std::span<const double> xs);

// n-1 denominator. Zero for fewer than two values.
double sample_variance(std::span<const double> xs);
double sample_stdev(std::span<const double> xs);

}  // namespace volclust
