#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rkm/lloyd.hpp"
#include "rkm/matrix.hpp"
#include "rkm/rng.hpp"
#include "rkm/seeding.hpp"

namespace rkm {

struct SchemeParams {
    int k = 1;
    int s = 0;                    // candidate oversampling; 0 means default_s(k)
    int restarts_per_batch = 10;  // J
    double beta = 5.0;
    double rtol_stop = 1e-4;
    int max_batches = 100;
    int lloyd_max_iters = 1000;
};

int effective_s(const SchemeParams& params);

/// One full seeding + Lloyd restart.
struct RunResult {
    Configuration config;  // loss set
    double loss = 0.0;
    int lloyd_iterations = 0;
    bool lloyd_converged = false;
    int empty_cluster_repairs = 0;
    std::uint64_t stream_id = 0;
};

struct BatchRecord {
    int batch_index = 0;  // 1-based
    std::vector<double> losses;
    double min_loss = 0.0;
    double mean_loss = 0.0;
    double best_loss_so_far = 0.0;
};

enum class StopReason { collapsed, failsafe, max_batches };
std::string to_string(StopReason reason);

struct SchemeOutcome {
    Configuration best;  // loss set
    double best_loss = 0.0;
    long long total_restarts = 0;  // J x completed batches
    std::vector<BatchRecord> batches;
    StopReason stop_reason = StopReason::max_batches;
};

/// Candidate-oversampled k-means++ seeding followed by Lloyd.
RunResult simple_kmeans(const Dataset& data, const SchemeParams& params, RngStream& rng);

/// Best of R independent simple_kmeans runs (first strict minimum wins).
/// Run r draws from the stream derived from (master_seed, 0, r).
SchemeOutcome repeated_kmeans(const Dataset& data, const SchemeParams& params, int restarts,
                              std::uint64_t master_seed, int threads = 1);

/// Normalized-gap weights: w_a = exp(-beta * (l_a - min) / (mean - min)),
/// all ones when every loss is equal (or beta is zero).
std::vector<double> compute_weights(const std::vector<double>& losses, double beta);

/// True when (mean - min) <= rtol * min, i.e. the batch losses have collapsed.
bool batch_collapsed(const std::vector<double>& losses, double rtol);

/// True when neither the batch minimum nor the batch mean decreased.
bool failsafe_triggered(const BatchRecord& current, const BatchRecord& previous);

/// Pools the final centroids of one batch into the next reservoir: run a's k
/// centroids all carry that run's weight w_a.
Reservoir make_reservoir(const std::vector<RunResult>& batch, double beta);

/// Batched-restart scheme: each batch runs J restarts seeded from the current
/// reservoir (initially the data with uniform weights), then the pooled final
/// centroids, weighted by run quality, become the next reservoir. Stops when
/// a batch collapses, when neither min nor mean improved, or at max_batches.
/// Restart r of batch t draws from the stream derived from (master_seed, t, r).
SchemeOutcome recombinator_kmeans(const Dataset& data, const SchemeParams& params,
                                  std::uint64_t master_seed, int threads = 1);

}  // namespace rkm
