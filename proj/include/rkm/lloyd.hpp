#pragma once

#include "rkm/matrix.hpp"

namespace rkm {

struct LloydStep {
    Configuration updated;   // centroids = cluster means (after empty repair), loss unset
    Assignment assignment;   // assignment of the *input* configuration
    int repaired = 0;        // empty clusters relocated this step
};

struct LloydOutcome {
    Configuration final;     // loss set
    int iterations = 0;      // completed assign/update rounds
    bool converged = false;  // fixed point reached (vs iteration cap)
    int empty_cluster_repairs = 0;
};

/// One alternating-minimization round: partition the points by nearest
/// centroid, then move each centroid to the mean of its cluster. Centroids
/// that end up with no points are relocated to the points currently farthest
/// from their assigned centroid, in decreasing distance order, each chosen
/// point excluded from later picks.
LloydStep lloyd_step(const Dataset& data, const Configuration& config);

/// Iterates lloyd_step until the partition stops changing or max_iters is
/// hit. The returned loss never exceeds the loss of `init`.
LloydOutcome run_lloyd(const Dataset& data, const Configuration& init, int max_iters = 1000);

}  // namespace rkm
