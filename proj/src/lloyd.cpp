#include "rkm/lloyd.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

#include "rkm/core.hpp"

namespace rkm {

namespace {

// Cluster means of the given partition; clusters without points keep the old
// centroid until the caller repairs them. Returns per-cluster counts.
std::vector<std::size_t> update_means(const Dataset& data, const Assignment& assignment,
                                      const Matrix& old_centroids, Matrix& out) {
    const std::size_t k = old_centroids.rows();
    const std::size_t d = data.dim();
    out = Matrix(k, d, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < data.n(); ++i) {
        const std::uint32_t a = assignment.labels[i];
        ++counts[a];
        const std::span<const double> x = data.point(i);
        double* c = out.row(a).data();
        for (std::size_t j = 0; j < d; ++j) {
            c[j] += x[j];
        }
    }
    for (std::size_t a = 0; a < k; ++a) {
        if (counts[a] == 0) {
            std::copy_n(old_centroids.row(a).data(), d, out.row(a).data());
            continue;
        }
        const double inv = 1.0 / static_cast<double>(counts[a]);
        double* c = out.row(a).data();
        for (std::size_t j = 0; j < d; ++j) {
            c[j] *= inv;
        }
    }
    return counts;
}

// Relocates empty centroids onto the points farthest from their assigned
// centroid (ties by lowest point index), one distinct point per centroid.
int repair_empty(const Dataset& data, const Assignment& assignment,
                 const std::vector<std::size_t>& counts, Matrix& centroids) {
    std::vector<std::size_t> empty;
    for (std::size_t a = 0; a < counts.size(); ++a) {
        if (counts[a] == 0) {
            empty.push_back(a);
        }
    }
    if (empty.empty()) {
        return 0;
    }

    std::vector<std::size_t> order(data.n());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
        if (assignment.dist_sq[lhs] != assignment.dist_sq[rhs]) {
            return assignment.dist_sq[lhs] > assignment.dist_sq[rhs];
        }
        return lhs < rhs;
    });

    int repaired = 0;
    std::size_t pos = 0;
    for (std::size_t a : empty) {
        if (pos >= order.size()) {
            break;  // more empty clusters than points (k > N); leave the rest
        }
        const std::span<const double> x = data.point(order[pos++]);
        std::copy(x.begin(), x.end(), centroids.row(a).begin());
        ++repaired;
    }
    return repaired;
}

}  // namespace

LloydStep lloyd_step(const Dataset& data, const Configuration& config) {
    LloydStep step;
    step.assignment = assign(data, config);
    Matrix means;
    const std::vector<std::size_t> counts = update_means(data, step.assignment, config.centroids, means);
    step.repaired = repair_empty(data, step.assignment, counts, means);
    step.updated = Configuration{std::move(means), std::nullopt};
    return step;
}

LloydOutcome run_lloyd(const Dataset& data, const Configuration& init, int max_iters) {
    if (max_iters < 1) {
        throw std::invalid_argument("run_lloyd: max_iters must be >= 1");
    }

    Assignment current = assign(data, init);
    const double initial_loss =
        std::accumulate(current.dist_sq.begin(), current.dist_sq.end(), 0.0);

    LloydOutcome out;
    Matrix centroids = init.centroids;
    Matrix means;
    double final_loss = initial_loss;

    for (int iter = 1; iter <= max_iters; ++iter) {
        const std::vector<std::size_t> counts = update_means(data, current, centroids, means);
        const int repaired = repair_empty(data, current, counts, means);
        out.empty_cluster_repairs += repaired;
        centroids = means;

        Assignment next = assign(data, Configuration{centroids, std::nullopt});
        final_loss = std::accumulate(next.dist_sq.begin(), next.dist_sq.end(), 0.0);
        out.iterations = iter;
        if (repaired == 0 && next.labels == current.labels) {
            out.converged = true;
            break;
        }
        current = std::move(next);
    }

    assert(final_loss <= initial_loss);
    out.final = Configuration{std::move(centroids), final_loss};
    return out;
}

}  // namespace rkm
