#include "rkm/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rkm/parallel.hpp"

namespace rkm {

namespace {

void validate_params(const SchemeParams& params) {
    if (params.k < 1) {
        throw std::invalid_argument("scheme params: k must be >= 1");
    }
    if (params.s < 0) {
        throw std::invalid_argument("scheme params: s must be >= 0 (0 selects the default)");
    }
    if (params.restarts_per_batch < 1) {
        throw std::invalid_argument("scheme params: J must be >= 1");
    }
    if (!(params.beta >= 0.0)) {
        throw std::invalid_argument("scheme params: beta must be >= 0");
    }
    if (!(params.rtol_stop > 0.0)) {
        throw std::invalid_argument("scheme params: rtol must be > 0");
    }
    if (params.max_batches < 1 || params.lloyd_max_iters < 1) {
        throw std::invalid_argument("scheme params: iteration caps must be >= 1");
    }
}

BatchRecord record_batch(int index, std::vector<double> losses, double best_so_far) {
    BatchRecord rec;
    rec.batch_index = index;
    rec.min_loss = *std::min_element(losses.begin(), losses.end());
    rec.mean_loss = std::accumulate(losses.begin(), losses.end(), 0.0) /
                    static_cast<double>(losses.size());
    rec.best_loss_so_far = best_so_far;
    rec.losses = std::move(losses);
    return rec;
}

// First strict minimum wins: run order breaks ties deterministically.
std::size_t best_run_index(const std::vector<RunResult>& runs) {
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].loss < runs[best].loss) {
            best = r;
        }
    }
    return best;
}

}  // namespace

int effective_s(const SchemeParams& params) {
    return params.s > 0 ? params.s : default_s(params.k);
}

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::collapsed: return "collapsed";
        case StopReason::failsafe: return "failsafe";
        case StopReason::max_batches: return "max_batches";
    }
    return "unknown";
}

RunResult simple_kmeans(const Dataset& data, const SchemeParams& params, RngStream& rng) {
    validate_params(params);
    Configuration seed = greedy_kmeanspp(data, params.k, effective_s(params), rng);
    LloydOutcome lloyd = run_lloyd(data, seed, params.lloyd_max_iters);
    RunResult result;
    result.loss = *lloyd.final.loss;
    result.config = std::move(lloyd.final);
    result.lloyd_iterations = lloyd.iterations;
    result.lloyd_converged = lloyd.converged;
    result.empty_cluster_repairs = lloyd.empty_cluster_repairs;
    return result;
}

SchemeOutcome repeated_kmeans(const Dataset& data, const SchemeParams& params, int restarts,
                              std::uint64_t master_seed, int threads) {
    validate_params(params);
    if (restarts < 1) {
        throw std::invalid_argument("repeated_kmeans: R must be >= 1");
    }

    std::vector<RunResult> runs(restarts);
    parallel_for(static_cast<std::size_t>(restarts), threads, [&](std::size_t r) {
        RngStream stream = RngStream::derived(master_seed, 0, r);
        runs[r] = simple_kmeans(data, params, stream);
        runs[r].stream_id = derive_seed(master_seed, 0, r);
    });

    std::vector<double> losses(runs.size());
    for (std::size_t r = 0; r < runs.size(); ++r) {
        losses[r] = runs[r].loss;
    }

    SchemeOutcome out;
    const std::size_t best = best_run_index(runs);
    out.best_loss = runs[best].loss;
    out.best = std::move(runs[best].config);
    out.total_restarts = restarts;
    out.batches.push_back(record_batch(1, std::move(losses), out.best_loss));
    out.stop_reason = StopReason::max_batches;  // fixed budget exhausted
    return out;
}

std::vector<double> compute_weights(const std::vector<double>& losses, double beta) {
    if (losses.empty()) {
        throw std::invalid_argument("compute_weights: losses must be nonempty");
    }
    for (double l : losses) {
        if (!std::isfinite(l)) {
            throw std::invalid_argument("compute_weights: losses must be finite");
        }
    }
    const double best = *std::min_element(losses.begin(), losses.end());
    const double mean = std::accumulate(losses.begin(), losses.end(), 0.0) /
                        static_cast<double>(losses.size());
    std::vector<double> weights(losses.size(), 1.0);
    if (mean == best) {
        return weights;
    }
    const double scale = 1.0 / (mean - best);
    for (std::size_t a = 0; a < losses.size(); ++a) {
        weights[a] = std::exp(-beta * (losses[a] - best) * scale);
    }
    return weights;
}

bool batch_collapsed(const std::vector<double>& losses, double rtol) {
    if (losses.empty()) {
        throw std::invalid_argument("batch_collapsed: losses must be nonempty");
    }
    const double min = *std::min_element(losses.begin(), losses.end());
    const double mean = std::accumulate(losses.begin(), losses.end(), 0.0) /
                        static_cast<double>(losses.size());
    return (mean - min) <= rtol * min;
}

bool failsafe_triggered(const BatchRecord& current, const BatchRecord& previous) {
    return current.min_loss >= previous.min_loss && current.mean_loss >= previous.mean_loss;
}

Reservoir make_reservoir(const std::vector<RunResult>& batch, double beta) {
    if (batch.empty()) {
        throw std::invalid_argument("make_reservoir: batch must be nonempty");
    }
    std::vector<double> losses(batch.size());
    for (std::size_t a = 0; a < batch.size(); ++a) {
        losses[a] = batch[a].loss;
    }
    const std::vector<double> run_weights = compute_weights(losses, beta);

    const std::size_t k = batch.front().config.k();
    const std::size_t d = batch.front().config.dim();
    Matrix pool(0, d);
    pool.reserve_rows(batch.size() * k);
    std::vector<double> weights;
    weights.reserve(batch.size() * k);
    for (std::size_t a = 0; a < batch.size(); ++a) {
        for (std::size_t c = 0; c < k; ++c) {
            pool.append_row(batch[a].config.centroids.row(c));
            weights.push_back(run_weights[a]);
        }
    }
    return Reservoir{std::move(pool), std::move(weights)};
}

SchemeOutcome recombinator_kmeans(const Dataset& data, const SchemeParams& params,
                                  std::uint64_t master_seed, int threads) {
    validate_params(params);
    const int J = params.restarts_per_batch;
    const int s = effective_s(params);

    Reservoir reservoir = uniform_reservoir(data.points());

    SchemeOutcome out;
    out.best_loss = std::numeric_limits<double>::infinity();

    for (int t = 1; t <= params.max_batches; ++t) {
        std::vector<RunResult> runs(J);
        parallel_for(static_cast<std::size_t>(J), threads, [&](std::size_t r) {
            RngStream stream = RngStream::derived(master_seed, static_cast<std::uint64_t>(t), r);
            Configuration seed = reservoir_kmeanspp(reservoir, data, params.k, s, stream);
            LloydOutcome lloyd = run_lloyd(data, seed, params.lloyd_max_iters);
            RunResult& run = runs[r];
            run.loss = *lloyd.final.loss;
            run.config = std::move(lloyd.final);
            run.lloyd_iterations = lloyd.iterations;
            run.lloyd_converged = lloyd.converged;
            run.empty_cluster_repairs = lloyd.empty_cluster_repairs;
            run.stream_id = derive_seed(master_seed, static_cast<std::uint64_t>(t), r);
        });

        std::vector<double> losses(runs.size());
        for (std::size_t r = 0; r < runs.size(); ++r) {
            losses[r] = runs[r].loss;
        }
        const std::size_t best = best_run_index(runs);
        if (runs[best].loss < out.best_loss) {
            out.best_loss = runs[best].loss;
            out.best = runs[best].config;
        }
        out.total_restarts += J;
        out.batches.push_back(record_batch(t, losses, out.best_loss));

        if (batch_collapsed(losses, params.rtol_stop)) {
            out.stop_reason = StopReason::collapsed;
            break;
        }
        if (out.batches.size() >= 2 &&
            failsafe_triggered(out.batches.back(), out.batches[out.batches.size() - 2])) {
            out.stop_reason = StopReason::failsafe;
            break;
        }
        if (t == params.max_batches) {
            out.stop_reason = StopReason::max_batches;
            break;
        }
        reservoir = make_reservoir(runs, params.beta);
    }
    return out;
}

}  // namespace rkm
