#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rkm/data_io.hpp"
#include "rkm/matrix.hpp"
#include "rkm/rng.hpp"
#include "rkm/schemes.hpp"

namespace rkm {

enum class Algorithm { simple, repeated, recombinator };
Algorithm parse_algorithm(const std::string& name);
std::string to_string(Algorithm alg);

struct ExperimentConfig {
    std::string dataset_path;
    TableFormat format = TableFormat::whitespace;
    bool unit_scale = false;
    Algorithm algorithm = Algorithm::recombinator;
    SchemeParams params;
    int repeated_restarts = 1;  // R, used by Algorithm::repeated
    int samples = 1;            // outcomes to collect
    std::string pool_path;      // loss pool CSV for the cost-matched baseline
    int pool_size = 0;          // when no pool file is given, build one this big
    std::uint64_t master_seed = 1;
    std::optional<double> success_threshold;
    std::string out_dir = ".";
    int threads = 0;  // 0: RKM_THREADS env or hardware concurrency
};

struct SummaryStats {
    double mean = 0.0;
    double std_dev = 0.0;  // sample standard deviation
    double min = 0.0;
    double median = 0.0;  // even length: mean of the two central order statistics
    double max = 0.0;
};

SummaryStats summarize(std::vector<double> values);

struct ExperimentSummary {
    int samples = 0;
    SummaryStats loss;
    SummaryStats restarts;
    std::optional<double> success_rate;
    std::optional<SummaryStats> rep_loss;  // bootstrap baseline, cost-matched per sample
    std::optional<double> rep_success_rate;
    std::optional<double> pool_min;
    std::optional<double> pool_median;
};

struct ExperimentResult {
    ExperimentSummary summary;
    std::vector<SchemeOutcome> outcomes;  // one per sample
    std::vector<std::uint64_t> sample_seeds;
    std::vector<double> rep_losses;    // empty unless a pool was supplied
    std::vector<double> wall_seconds;  // per sample; never written to any CSV
};

struct PoolResult {
    std::vector<double> losses;
    std::vector<std::uint64_t> stream_ids;
    Matrix centroids;  // pool_size * k rows when capture_centroids, else empty
};

/// Independent simple_kmeans losses; run i draws from (master_seed, 0, i).
PoolResult build_simple_pool(const Dataset& data, const SchemeParams& params, int pool_size,
                             std::uint64_t master_seed, int threads,
                             bool capture_centroids = false);

/// Each trial is the minimum of R with-replacement draws from the pool.
std::vector<double> bootstrap_repeated(const std::vector<double>& pool, int restarts, int trials,
                                       RngStream& rng);

/// Runs the configured experiment, writes <out_dir>/runs.csv and
/// <out_dir>/summary.csv, and returns the collected outcomes. Sample j draws
/// from the seed derived as (master_seed, 1, j); its bootstrap trial from
/// (master_seed, 2, j). Output bytes depend only on the config, never on the
/// worker-thread count.
ExperimentResult run_experiment(const Dataset& data, const ExperimentConfig& config);

/// (bin lower edge, count) rows at the given bin width.
void emit_histogram(const std::vector<double>& losses, double bin_width, const std::string& path,
                    const std::string& header_comment);

/// (x bin, y bin, count / run_count) rows over 2-d points, skipping empty
/// bins.
void emit_density2d(const Matrix& points, double bin_size, std::size_t run_count,
                    const std::string& path, const std::string& header_comment);

void write_pool_csv(const std::string& path, const PoolResult& pool,
                    const std::string& header_comment);
void write_centroids_csv(const std::string& path, const Matrix& centroids, std::size_t k_per_run,
                         const std::string& header_comment);

/// Cells of a CSV file as raw strings; comment lines (leading '#') skipped.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(const std::string& name) const;
};
CsvTable read_csv(const std::string& path);

/// Numeric column by header name.
std::vector<double> read_csv_column(const std::string& path, const std::string& column);

}  // namespace rkm
