#pragma once

#include <vector>

#include "rkm/matrix.hpp"
#include "rkm/rng.hpp"

namespace rkm {

/// Pool of candidate seed points with one nonnegative prior weight per point
/// (not all zero). Seeds are always copies of pool rows.
struct Reservoir {
    Matrix pool;
    std::vector<double> weights;
};

/// Reservoir over `pool` with unit weights.
Reservoir uniform_reservoir(Matrix pool);

/// Incremental state for one seeding run: the minimum squared distance from
/// every pool point and every data point to the centroids chosen so far,
/// cumulative sampling masses, and the trial/best partial-loss buffers that
/// let a candidate be evaluated in O(Nd) and committed without a second pass.
/// Total extra memory is O(M + N) on top of the inputs.
class SeedingScratch {
public:
    SeedingScratch(const Reservoir& res, const Dataset& data);

    int centroid_count() const { return count_; }
    const std::vector<double>& pool_min_dist_sq() const { return pool_min_; }

    /// Loss of the chosen centroids against the data (sum of data-side
    /// minimum distances, accumulated in point-index order).
    double partial_loss() const { return data_loss_; }

    /// Rebuilds the cumulative sampling mass: w_i * min_dist_i once at least
    /// one centroid exists, w_i alone before the first pick or when the total
    /// mass is exactly zero (every pool point coincides with a centroid).
    void rebuild_sampling_mass(const Reservoir& res);

    /// One inverse-CDF draw against the last rebuilt mass.
    std::size_t sample(RngStream& rng) const;

    /// Partial loss of (chosen centroids + cand); fills the trial buffer.
    double evaluate_candidate(const Dataset& data, std::span<const double> cand);

    /// Marks the last evaluated candidate as the slot's best so far.
    void keep_evaluated_candidate();

    /// Appends the winning candidate: the best buffer becomes the data-side
    /// min-dist array and the pool-side distances are min-updated.
    void commit_best(const Reservoir& res, std::span<const double> c, double best_loss);

    /// Full-recompute append, used for the first centroid and by callers that
    /// skip candidate evaluation.
    void note_centroid(const Reservoir& res, const Dataset& data, std::span<const double> c);

private:
    std::vector<double> pool_min_;
    std::vector<double> data_min_;
    std::vector<double> trial_;
    std::vector<double> best_;
    std::vector<double> cumulative_;
    double data_loss_ = 0.0;
    int count_ = 0;
};

/// Draws one pool index with probability proportional to
/// weight_i * min_dist_sq_i (weight_i alone when no centroid has been chosen
/// yet or when the total mass is exactly zero). Throws if all weights are
/// zero.
std::size_t d2_sample(const Reservoir& res, SeedingScratch& scratch, RngStream& rng);

/// Candidate oversampling default, floor(2 + ln k), at least 1.
int default_s(int k);

/// Plain k-means++: first centroid uniform over the data, every further one
/// D2-sampled. Returned loss is unset.
Configuration basic_kmeanspp(const Dataset& data, int k, RngStream& rng);

/// k-means++ with candidate oversampling: each slot after the first draws s
/// D2-sampled candidates and keeps the one whose partial loss is smallest
/// (first drawn wins ties). Stream-for-stream identical to basic_kmeanspp at
/// s = 1.
Configuration greedy_kmeanspp(const Dataset& data, int k, int s, RngStream& rng);

/// Generalization of greedy_kmeanspp that samples seeds from a weighted
/// reservoir while still scoring candidates against the original data. With
/// the data itself as reservoir and uniform weights it reproduces
/// greedy_kmeanspp draw for draw.
Configuration reservoir_kmeanspp(const Reservoir& res, const Dataset& data, int k, int s,
                                 RngStream& rng);

}  // namespace rkm
