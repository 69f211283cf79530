#pragma once

#include "rkm/matrix.hpp"

namespace rkm {

/// Squared Euclidean distance, accumulated in coordinate order.
/// Exactly zero when both points are identical.
double squared_distance(std::span<const double> a, std::span<const double> b);

/// Labels every point with its nearest centroid (ties broken by lowest
/// centroid index) and records the squared distance to it.
Assignment assign(const Dataset& data, const Configuration& config);

/// Sum over points of the squared distance to the nearest centroid,
/// accumulated in point-index order. Equals the sum of assign()'s distances.
double loss(const Dataset& data, const Configuration& config);

}  // namespace rkm
