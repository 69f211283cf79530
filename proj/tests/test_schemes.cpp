#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "rkm/core.hpp"
#include "rkm/lloyd.hpp"
#include "rkm/schemes.hpp"
#include "test_util.hpp"

using test_util::dataset_from;
using test_util::random_dataset;

namespace {

rkm::SchemeParams params_for(int k, int J = 10, double beta = 5.0) {
    rkm::SchemeParams p;
    p.k = k;
    p.restarts_per_batch = J;
    p.beta = beta;
    return p;
}

// blobby synthetic instance with c centers
rkm::Dataset blob_dataset(std::uint64_t seed, int centers, int per_center, double spread) {
    rkm::RngStream rng(seed);
    rkm::Matrix m(0, 2);
    for (int c = 0; c < centers; ++c) {
        const double cx = 10.0 * rng.next_double();
        const double cy = 10.0 * rng.next_double();
        for (int i = 0; i < per_center; ++i) {
            const double row[2] = {cx + spread * (rng.next_double() - 0.5),
                                   cy + spread * (rng.next_double() - 0.5)};
            m.append_row(row);
        }
    }
    return rkm::Dataset(std::move(m));
}

}  // namespace

TEST_CASE("compute_weights implements the normalized-gap formula") {
    CHECK(rkm::compute_weights({4.0, 7.0, 10.0}, 0.0) == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(rkm::compute_weights({3.0, 3.0, 3.0}, 12.0) == std::vector<double>{1.0, 1.0, 1.0});

    const std::vector<double> w = rkm::compute_weights({1.0, 2.0, 3.0}, 5.0);
    CHECK(w[0] == 1.0);  // the best loss always gets weight 1
    CHECK(w[1] == doctest::Approx(std::exp(-5.0)).epsilon(1e-14));
    CHECK(w[2] == doctest::Approx(std::exp(-10.0)).epsilon(1e-14));

    CHECK_THROWS_AS((void)rkm::compute_weights({}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)rkm::compute_weights({1.0, std::nan("")}, 1.0), std::invalid_argument);
}

TEST_CASE("batch_collapsed compares mean to min at relative tolerance") {
    CHECK(rkm::batch_collapsed({5.0, 5.0, 5.0}, 1e-12));
    CHECK(rkm::batch_collapsed({100.0, 100.02}, 1e-4));   // boundary, inclusive
    CHECK_FALSE(rkm::batch_collapsed({100.0, 103.0}, 1e-4));
    CHECK(rkm::batch_collapsed({0.0, 0.0}, 1e-4));        // zero-loss batches collapse
    CHECK_FALSE(rkm::batch_collapsed({0.0, 1.0}, 1e-4));
}

TEST_CASE("failsafe triggers only when min and mean both stall") {
    const auto rec = [](double min, double mean) {
        rkm::BatchRecord r;
        r.min_loss = min;
        r.mean_loss = mean;
        return r;
    };
    CHECK_FALSE(rkm::failsafe_triggered(rec(1.0, 2.0), rec(1.5, 2.5)));  // both improved
    CHECK(rkm::failsafe_triggered(rec(1.0, 2.0), rec(1.0, 2.0)));        // identical
    CHECK_FALSE(rkm::failsafe_triggered(rec(0.9, 2.6), rec(1.0, 2.5)));  // min down, mean up
    CHECK(rkm::failsafe_triggered(rec(1.1, 2.5), rec(1.0, 2.5)));        // min up, mean flat
}

TEST_CASE("make_reservoir pools J*k centroids with per-run weights") {
    const auto data = random_dataset(99, 20, 2);
    std::vector<rkm::RunResult> batch(3);
    for (int r = 0; r < 3; ++r) {
        rkm::RngStream rng(r);
        batch[r] = rkm::simple_kmeans(data, params_for(4), rng);
    }
    const rkm::Reservoir res = rkm::make_reservoir(batch, 5.0);
    REQUIRE(res.pool.rows() == 12);
    REQUIRE(res.weights.size() == 12);

    const std::vector<double> expected =
        rkm::compute_weights({batch[0].loss, batch[1].loss, batch[2].loss}, 5.0);
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            CHECK(res.weights[r * 4 + c] == expected[r]);
            CHECK(std::equal(res.pool.row(r * 4 + c).begin(), res.pool.row(r * 4 + c).end(),
                             batch[r].config.centroids.row(c).begin()));
        }
    }

    const rkm::Reservoir flat = rkm::make_reservoir(batch, 0.0);
    CHECK(flat.weights == std::vector<double>(12, 1.0));
}

TEST_CASE("simple_kmeans reaches zero loss when k covers all points") {
    const auto data = random_dataset(123, 6, 2);
    rkm::RngStream rng(5);
    const rkm::RunResult run = rkm::simple_kmeans(data, params_for(6), rng);
    CHECK(run.loss == 0.0);
    CHECK(*run.config.loss == 0.0);
    CHECK(run.lloyd_converged);
}

TEST_CASE("simple_kmeans caches a loss consistent with recomputation") {
    const auto data = blob_dataset(7, 4, 20, 0.5);
    rkm::RngStream rng(11);
    const rkm::RunResult run = rkm::simple_kmeans(data, params_for(4), rng);
    CHECK(rkm::loss(data, run.config) == doctest::Approx(run.loss).epsilon(1e-12));
}

TEST_CASE("repeated with R=1 is one simple run on the derived stream") {
    const auto data = blob_dataset(21, 3, 15, 0.8);
    const rkm::SchemeParams params = params_for(3);
    const rkm::SchemeOutcome rep = rkm::repeated_kmeans(data, params, 1, 777);
    rkm::RngStream stream = rkm::RngStream::derived(777, 0, 0);
    const rkm::RunResult simple = rkm::simple_kmeans(data, params, stream);
    CHECK(rep.best_loss == simple.loss);
    CHECK(rep.best.centroids == simple.config.centroids);
    CHECK(rep.total_restarts == 1);
}

TEST_CASE("repeated returns the minimum of its recorded losses") {
    const auto data = blob_dataset(31, 3, 10, 1.0);
    const rkm::SchemeOutcome out = rkm::repeated_kmeans(data, params_for(3), 20, 9);
    REQUIRE(out.batches.size() == 1);
    REQUIRE(out.batches[0].losses.size() == 20);
    const double min = *std::min_element(out.batches[0].losses.begin(),
                                         out.batches[0].losses.end());
    CHECK(out.best_loss == min);
    CHECK(out.total_restarts == 20);
    CHECK(rkm::loss(data, out.best) == doctest::Approx(out.best_loss).epsilon(1e-12));
}

TEST_CASE("repeated with R=100 finds the exhaustive optimum on tiny instances") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto data = random_dataset(seed + 40, 8, 2);
        const rkm::SchemeOutcome out = rkm::repeated_kmeans(data, params_for(2), 100, seed);
        const double optimum = oracles::exhaustive_best_loss(data, 2);
        CHECK(out.best_loss == doctest::Approx(optimum).epsilon(1e-9));
    }
}

TEST_CASE("repeated is thread-count invariant") {
    const auto data = blob_dataset(51, 4, 10, 0.6);
    const rkm::SchemeOutcome one = rkm::repeated_kmeans(data, params_for(4), 16, 31, 1);
    const rkm::SchemeOutcome four = rkm::repeated_kmeans(data, params_for(4), 16, 31, 4);
    CHECK(one.batches[0].losses == four.batches[0].losses);
    CHECK(one.best.centroids == four.best.centroids);
}

TEST_CASE("recombinator with J=1 collapses after one batch") {
    const auto data = blob_dataset(61, 3, 12, 0.7);
    rkm::SchemeParams params = params_for(3, 1);
    const rkm::SchemeOutcome out = rkm::recombinator_kmeans(data, params, 55);
    CHECK(out.stop_reason == rkm::StopReason::collapsed);
    CHECK(out.total_restarts == 1);
    REQUIRE(out.batches.size() == 1);

    // equivalent to one uniform-reservoir seeded run on the same stream
    rkm::RngStream stream = rkm::RngStream::derived(55, 1, 0);
    const rkm::Configuration seed = rkm::reservoir_kmeanspp(
        rkm::uniform_reservoir(data.points()), data, 3, rkm::effective_s(params), stream);
    const rkm::LloydOutcome lloyd = rkm::run_lloyd(data, seed, params.lloyd_max_iters);
    CHECK(out.best_loss == *lloyd.final.loss);
    CHECK(out.best.centroids == lloyd.final.centroids);
}

TEST_CASE("recombinator bookkeeping invariants hold") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto data = blob_dataset(seed + 70, 4, 12, 1.5);
        rkm::SchemeParams params = params_for(4, 5);
        params.rtol_stop = 1e-6;  // make collapse harder so several batches run
        const rkm::SchemeOutcome out = rkm::recombinator_kmeans(data, params, seed);

        CHECK(out.total_restarts ==
              static_cast<long long>(out.batches.size()) * params.restarts_per_batch);
        double best = std::numeric_limits<double>::infinity();
        double running_min = std::numeric_limits<double>::infinity();
        for (const rkm::BatchRecord& b : out.batches) {
            CHECK(b.losses.size() == 5);
            for (double l : b.losses) {
                running_min = std::min(running_min, l);
            }
            CHECK(b.best_loss_so_far == running_min);
            CHECK(b.best_loss_so_far <= best);
            best = b.best_loss_so_far;
        }
        CHECK(out.best_loss == running_min);
        CHECK(rkm::loss(data, out.best) == doctest::Approx(out.best_loss).epsilon(1e-12));
    }
}

TEST_CASE("recombinator respects the batch cap") {
    const auto data = random_dataset(81, 60, 2);
    rkm::SchemeParams params = params_for(6, 2, 0.0);
    params.rtol_stop = 1e-15;
    params.max_batches = 3;
    const rkm::SchemeOutcome out = rkm::recombinator_kmeans(data, params, 3);
    CHECK(out.batches.size() <= 3);
    if (out.batches.size() == 3) {
        CHECK((out.stop_reason == rkm::StopReason::max_batches ||
               out.stop_reason == rkm::StopReason::collapsed ||
               out.stop_reason == rkm::StopReason::failsafe));
    }
}

TEST_CASE("strong weighting drives batches downhill on most instances") {
    int monotone = 0;
    const int instances = 40;
    for (int i = 0; i < instances; ++i) {
        const auto data = blob_dataset(300 + i, 5, 10, 1.0);
        rkm::SchemeParams params = params_for(5, 4, 1000.0);
        const rkm::SchemeOutcome out = rkm::recombinator_kmeans(data, params, 1000 + i);
        bool ok = true;
        for (std::size_t t = 1; t < out.batches.size(); ++t) {
            ok = ok && out.batches[t].min_loss <= out.batches[t - 1].min_loss * (1 + 1e-12) &&
                 out.batches[t].mean_loss <= out.batches[t - 1].mean_loss * (1 + 1e-12);
        }
        if (ok) {
            ++monotone;
        } else {
            MESSAGE("non-monotone batch sequence on instance ", i);
        }
    }
    CHECK(monotone >= instances * 9 / 10);
}

TEST_CASE("recombinator is thread-count invariant") {
    const auto data = blob_dataset(91, 4, 12, 1.2);
    rkm::SchemeParams params = params_for(4, 6);
    params.rtol_stop = 1e-8;
    const rkm::SchemeOutcome one = rkm::recombinator_kmeans(data, params, 17, 1);
    const rkm::SchemeOutcome four = rkm::recombinator_kmeans(data, params, 17, 4);
    REQUIRE(one.batches.size() == four.batches.size());
    for (std::size_t t = 0; t < one.batches.size(); ++t) {
        CHECK(one.batches[t].losses == four.batches[t].losses);
    }
    CHECK(one.best_loss == four.best_loss);
    CHECK(one.best.centroids == four.best.centroids);
    CHECK(one.stop_reason == four.stop_reason);
}

TEST_CASE("parameter validation") {
    const auto data = dataset_from({{0}, {1}});
    rkm::RngStream rng(1);
    rkm::SchemeParams bad = params_for(0);
    CHECK_THROWS_AS((void)rkm::simple_kmeans(data, bad, rng), std::invalid_argument);
    bad = params_for(1);
    bad.beta = -1.0;
    CHECK_THROWS_AS((void)rkm::recombinator_kmeans(data, bad, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)rkm::repeated_kmeans(data, params_for(1), 0, 1), std::invalid_argument);
}
