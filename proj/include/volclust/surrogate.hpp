#pragma once

#include <cstddef>

#include "volclust/ingest.hpp"
#include "volclust/random.hpp"

namespace volclust {

/// Fisher-Yates permutation of the values. Throws on empty input.
ReturnSeries shuffle(const ReturnSeries& r, Seed seed);

/// n iid N(0, sigma^2) draws: standard normals scaled by sigma.
ReturnSeries iid_gaussian(std::size_t n, double sigma, Seed seed);

}  // namespace volclust
