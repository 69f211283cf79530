#include "rkm/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "rkm/core.hpp"

namespace rkm {

namespace {

void validate_reservoir(const Reservoir& res) {
    if (res.pool.rows() == 0) {
        throw std::invalid_argument("reservoir pool is empty");
    }
    if (res.weights.size() != res.pool.rows()) {
        throw std::invalid_argument("reservoir weight count does not match pool size");
    }
    double total = 0.0;
    for (double w : res.weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("reservoir weights must be finite and nonnegative");
        }
        total += w;
    }
    if (!(total > 0.0)) {
        throw std::invalid_argument("reservoir weights are all zero");
    }
}

}  // namespace

Reservoir uniform_reservoir(Matrix pool) {
    std::vector<double> weights(pool.rows(), 1.0);
    return Reservoir{std::move(pool), std::move(weights)};
}

SeedingScratch::SeedingScratch(const Reservoir& res, const Dataset& data) {
    validate_reservoir(res);
    if (res.pool.cols() != data.dim()) {
        throw std::invalid_argument("reservoir dimensionality does not match dataset");
    }
    pool_min_.assign(res.pool.rows(), 0.0);
    data_min_.assign(data.n(), 0.0);
    trial_.assign(data.n(), 0.0);
    best_.assign(data.n(), 0.0);
    cumulative_.assign(res.pool.rows(), 0.0);
}

void SeedingScratch::rebuild_sampling_mass(const Reservoir& res) {
    const std::size_t m = res.weights.size();
    if (m != cumulative_.size()) {
        throw std::invalid_argument("seeding scratch was built for a different reservoir");
    }
    double running = 0.0;
    if (count_ > 0) {
        for (std::size_t i = 0; i < m; ++i) {
            running += res.weights[i] * pool_min_[i];
            cumulative_[i] = running;
        }
        if (running > 0.0) {
            return;
        }
    }
    // No centroid chosen yet, or every pool point sits on a centroid: the
    // prior weights alone drive the draw.
    running = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        running += res.weights[i];
        cumulative_[i] = running;
    }
}

std::size_t SeedingScratch::sample(RngStream& rng) const {
    return sample_from_cumulative(cumulative_, rng);
}

double SeedingScratch::evaluate_candidate(const Dataset& data, std::span<const double> cand) {
    const std::size_t n = data.n();
    const std::size_t d = data.dim();
    const double* c = cand.data();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* x = data.point(i).data();
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = x[j] - c[j];
            s += diff * diff;
        }
        const double m = std::min(data_min_[i], s);
        trial_[i] = m;
        total += m;
    }
    return total;
}

void SeedingScratch::keep_evaluated_candidate() {
    std::swap(trial_, best_);
}

void SeedingScratch::commit_best(const Reservoir& res, std::span<const double> c,
                                 double best_loss) {
    std::swap(data_min_, best_);
    data_loss_ = best_loss;
    const std::size_t m = res.pool.rows();
    for (std::size_t i = 0; i < m; ++i) {
        pool_min_[i] = std::min(pool_min_[i], squared_distance(res.pool.row(i), c));
    }
    ++count_;
}

void SeedingScratch::note_centroid(const Reservoir& res, const Dataset& data,
                                   std::span<const double> c) {
    if (res.pool.rows() != pool_min_.size() || data.n() != data_min_.size()) {
        throw std::invalid_argument("seeding scratch was built for different inputs");
    }
    const bool first = (count_ == 0);
    for (std::size_t i = 0; i < res.pool.rows(); ++i) {
        const double d2 = squared_distance(res.pool.row(i), c);
        pool_min_[i] = first ? d2 : std::min(pool_min_[i], d2);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
        const double d2 = squared_distance(data.point(i), c);
        data_min_[i] = first ? d2 : std::min(data_min_[i], d2);
        total += data_min_[i];
    }
    data_loss_ = total;
    ++count_;
}

std::size_t d2_sample(const Reservoir& res, SeedingScratch& scratch, RngStream& rng) {
    scratch.rebuild_sampling_mass(res);
    return scratch.sample(rng);
}

int default_s(int k) {
    if (k < 1) {
        throw std::invalid_argument("default_s: k must be >= 1");
    }
    const int s = static_cast<int>(std::floor(2.0 + std::log(static_cast<double>(k))));
    return std::max(1, s);
}

Configuration basic_kmeanspp(const Dataset& data, int k, RngStream& rng) {
    if (k < 1) {
        throw std::invalid_argument("basic_kmeanspp: k must be >= 1");
    }
    const std::size_t n = data.n();
    std::vector<double> min_dist(n, 0.0);
    std::vector<double> cumulative(n, 0.0);

    const auto uniform_pick = [&] {
        double running = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            running += 1.0;
            cumulative[i] = running;
        }
        return sample_from_cumulative(cumulative, rng);
    };

    Matrix centroids(0, data.dim());
    const std::size_t first = uniform_pick();
    centroids.append_row(data.point(first));
    for (std::size_t i = 0; i < n; ++i) {
        min_dist[i] = squared_distance(data.point(i), data.point(first));
    }

    for (int a = 1; a < k; ++a) {
        double running = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            running += min_dist[i];
            cumulative[i] = running;
        }
        const std::size_t idx =
            running > 0.0 ? sample_from_cumulative(cumulative, rng) : uniform_pick();
        centroids.append_row(data.point(idx));
        for (std::size_t i = 0; i < n; ++i) {
            min_dist[i] = std::min(min_dist[i], squared_distance(data.point(i), data.point(idx)));
        }
    }
    return Configuration{std::move(centroids), std::nullopt};
}

Configuration greedy_kmeanspp(const Dataset& data, int k, int s, RngStream& rng) {
    return reservoir_kmeanspp(uniform_reservoir(data.points()), data, k, s, rng);
}

Configuration reservoir_kmeanspp(const Reservoir& res, const Dataset& data, int k, int s,
                                 RngStream& rng) {
    if (k < 1 || s < 1) {
        throw std::invalid_argument("reservoir_kmeanspp: k and s must be >= 1");
    }
    SeedingScratch scratch(res, data);

    Matrix centroids(0, data.dim());
    scratch.rebuild_sampling_mass(res);
    const std::size_t first = scratch.sample(rng);
    centroids.append_row(res.pool.row(first));
    scratch.note_centroid(res, data, res.pool.row(first));

    for (int a = 1; a < k; ++a) {
        scratch.rebuild_sampling_mass(res);
        double best_loss = std::numeric_limits<double>::infinity();
        std::size_t best_idx = 0;
        for (int b = 0; b < s; ++b) {
            const std::size_t idx = scratch.sample(rng);
            const double cand_loss = scratch.evaluate_candidate(data, res.pool.row(idx));
            if (cand_loss < best_loss) {
                best_loss = cand_loss;
                best_idx = idx;
                scratch.keep_evaluated_candidate();
            }
        }
        centroids.append_row(res.pool.row(best_idx));
        scratch.commit_best(res, res.pool.row(best_idx), best_loss);
    }
    return Configuration{std::move(centroids), std::nullopt};
}

}  // namespace rkm
