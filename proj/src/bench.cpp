#include "rkm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rkm/parallel.hpp"

namespace rkm {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt(*v) : std::string();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed for " + path);
    }
}

// Derivation tags: pool runs use (seed, 0, i); experiment samples (seed, 1, j);
// bootstrap trials (seed, 2, j).
constexpr std::uint64_t kPoolTag = 0;
constexpr std::uint64_t kSampleTag = 1;
constexpr std::uint64_t kBootstrapTag = 2;

}  // namespace

Algorithm parse_algorithm(const std::string& name) {
    if (name == "simple") return Algorithm::simple;
    if (name == "repeated") return Algorithm::repeated;
    if (name == "recombinator") return Algorithm::recombinator;
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::string to_string(Algorithm alg) {
    switch (alg) {
        case Algorithm::simple: return "simple";
        case Algorithm::repeated: return "repeated";
        case Algorithm::recombinator: return "recombinator";
    }
    return "unknown";
}

SummaryStats summarize(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("summarize: values must be nonempty");
    }
    const std::size_t n = values.size();
    SummaryStats stats;
    stats.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : values) {
            const double d = v - stats.mean;
            ss += d * d;
        }
        stats.std_dev = std::sqrt(ss / static_cast<double>(n - 1));
    }
    std::sort(values.begin(), values.end());
    stats.min = values.front();
    stats.max = values.back();
    stats.median = (n % 2 == 1) ? values[n / 2]
                                : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    return stats;
}

PoolResult build_simple_pool(const Dataset& data, const SchemeParams& params, int pool_size,
                             std::uint64_t master_seed, int threads, bool capture_centroids) {
    if (pool_size < 1) {
        throw std::invalid_argument("build_simple_pool: pool size must be >= 1");
    }
    PoolResult pool;
    pool.losses.resize(pool_size);
    pool.stream_ids.resize(pool_size);
    std::vector<Matrix> centroids(capture_centroids ? pool_size : 0);

    parallel_for(static_cast<std::size_t>(pool_size), threads, [&](std::size_t i) {
        RngStream stream = RngStream::derived(master_seed, kPoolTag, i);
        RunResult run = simple_kmeans(data, params, stream);
        pool.losses[i] = run.loss;
        pool.stream_ids[i] = derive_seed(master_seed, kPoolTag, i);
        if (capture_centroids) {
            centroids[i] = std::move(run.config.centroids);
        }
    });

    if (capture_centroids) {
        pool.centroids = Matrix(0, data.dim());
        pool.centroids.reserve_rows(static_cast<std::size_t>(pool_size) * params.k);
        for (const Matrix& m : centroids) {
            for (std::size_t c = 0; c < m.rows(); ++c) {
                pool.centroids.append_row(m.row(c));
            }
        }
    }
    return pool;
}

std::vector<double> bootstrap_repeated(const std::vector<double>& pool, int restarts, int trials,
                                       RngStream& rng) {
    if (pool.empty() || restarts < 1 || trials < 1) {
        throw std::invalid_argument("bootstrap_repeated: need a nonempty pool, R >= 1, trials >= 1");
    }
    const double n = static_cast<double>(pool.size());
    const auto draw = [&] {
        const std::size_t i = static_cast<std::size_t>(rng.next_double() * n);
        return pool[std::min(i, pool.size() - 1)];
    };
    std::vector<double> mins(trials);
    for (int t = 0; t < trials; ++t) {
        double best = draw();
        for (int r = 1; r < restarts; ++r) {
            best = std::min(best, draw());
        }
        mins[t] = best;
    }
    return mins;
}

namespace {

std::string config_comment(const ExperimentConfig& config) {
    std::ostringstream out;
    out << "# alg=" << to_string(config.algorithm) << " dataset=" << config.dataset_path
        << " format=" << (config.format == TableFormat::csv ? "csv" : "ws")
        << " unit_scale=" << (config.unit_scale ? 1 : 0) << " k=" << config.params.k
        << " J=" << config.params.restarts_per_batch << " beta=" << config.params.beta
        << " s=" << effective_s(config.params) << " R=" << config.repeated_restarts
        << " samples=" << config.samples << " rtol=" << fmt(config.params.rtol_stop)
        << " max_batches=" << config.params.max_batches
        << " lloyd_max_iters=" << config.params.lloyd_max_iters;
    if (config.success_threshold) {
        out << " success_threshold=" << fmt(*config.success_threshold);
    }
    if (!config.pool_path.empty()) {
        out << " pool=" << config.pool_path;
    }
    if (config.pool_size > 0) {
        out << " pool_size=" << config.pool_size;
    }
    out << " seed=" << config.master_seed;
    return out.str();
}

double success_fraction(const std::vector<double>& losses, double threshold) {
    std::size_t hits = 0;
    for (double l : losses) {
        if (l <= threshold) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(losses.size());
}

void write_runs_csv(const std::string& path, const ExperimentConfig& config,
                    const ExperimentResult& result) {
    std::ofstream out = open_out(path);
    out << config_comment(config) << '\n';
    out << "run_id,loss,R,batches,stop_reason,seed_stream\n";
    for (std::size_t j = 0; j < result.outcomes.size(); ++j) {
        const SchemeOutcome& o = result.outcomes[j];
        const std::string reason =
            config.algorithm == Algorithm::simple ? "none" : to_string(o.stop_reason);
        out << j << ',' << fmt(o.best_loss) << ',' << o.total_restarts << ','
            << o.batches.size() << ',' << reason << ',' << result.sample_seeds[j] << '\n';
    }
    finish(out, path);
}

void write_summary_csv(const std::string& path, const ExperimentConfig& config,
                       const ExperimentSummary& s) {
    std::ofstream out = open_out(path);
    out << config_comment(config) << '\n';
    out << "alg,dataset,k,J,beta,s,samples,seed,"
           "loss_mean,loss_std,loss_min,loss_median,loss_max,success_rate,"
           "R_mean,R_std,R_min,R_median,R_max,"
           "rep_mean,rep_std,rep_min,rep_median,rep_max,rep_success_rate,"
           "pool_min,pool_median\n";
    out << to_string(config.algorithm) << ',' << config.dataset_path << ',' << config.params.k
        << ',' << config.params.restarts_per_batch << ',' << fmt(config.params.beta) << ','
        << effective_s(config.params) << ',' << s.samples << ',' << config.master_seed << ','
        << fmt(s.loss.mean) << ',' << fmt(s.loss.std_dev) << ',' << fmt(s.loss.min) << ','
        << fmt(s.loss.median) << ',' << fmt(s.loss.max) << ',' << fmt_opt(s.success_rate) << ','
        << fmt(s.restarts.mean) << ',' << fmt(s.restarts.std_dev) << ',' << fmt(s.restarts.min)
        << ',' << fmt(s.restarts.median) << ',' << fmt(s.restarts.max) << ',';
    if (s.rep_loss) {
        out << fmt(s.rep_loss->mean) << ',' << fmt(s.rep_loss->std_dev) << ','
            << fmt(s.rep_loss->min) << ',' << fmt(s.rep_loss->median) << ','
            << fmt(s.rep_loss->max);
    } else {
        out << ",,,,";
    }
    out << ',' << fmt_opt(s.rep_success_rate) << ',' << fmt_opt(s.pool_min) << ','
        << fmt_opt(s.pool_median) << '\n';
    finish(out, path);
}

}  // namespace

ExperimentResult run_experiment(const Dataset& data, const ExperimentConfig& config) {
    if (config.samples < 1) {
        throw std::invalid_argument("run_experiment: samples must be >= 1");
    }

    std::filesystem::create_directories(config.out_dir);
    const std::filesystem::path dir(config.out_dir);

    std::vector<double> pool;
    if (!config.pool_path.empty()) {
        pool = read_csv_column(config.pool_path, "loss");
    } else if (config.pool_size > 0) {
        const PoolResult built = build_simple_pool(data, config.params, config.pool_size,
                                                   config.master_seed, config.threads);
        write_pool_csv((dir / "pool.csv").string(), built, config_comment(config));
        pool = built.losses;
    }
    if (config.algorithm == Algorithm::repeated && config.repeated_restarts < 1) {
        throw std::invalid_argument("run_experiment: repeated needs R >= 1");
    }

    ExperimentResult result;
    result.outcomes.resize(config.samples);
    result.sample_seeds.resize(config.samples);
    result.wall_seconds.resize(config.samples);

    // When a single outcome is requested its restarts run in parallel
    // instead; either way the streams, and hence the outputs, are fixed by
    // (master_seed, sample index) alone.
    const int outer = config.samples > 1 ? config.threads : 1;
    const int inner = config.samples > 1 ? 1 : config.threads;

    parallel_for(static_cast<std::size_t>(config.samples), outer, [&](std::size_t j) {
        const std::uint64_t sample_seed = derive_seed(config.master_seed, kSampleTag, j);
        result.sample_seeds[j] = sample_seed;
        const auto started = std::chrono::steady_clock::now();
        switch (config.algorithm) {
            case Algorithm::simple: {
                RngStream stream(sample_seed);
                RunResult run = simple_kmeans(data, config.params, stream);
                SchemeOutcome outcome;
                outcome.best_loss = run.loss;
                outcome.best = std::move(run.config);
                outcome.total_restarts = 1;
                outcome.batches.push_back(
                    BatchRecord{1, {run.loss}, run.loss, run.loss, run.loss});
                result.outcomes[j] = std::move(outcome);
                break;
            }
            case Algorithm::repeated:
                result.outcomes[j] = repeated_kmeans(data, config.params,
                                                     config.repeated_restarts, sample_seed, inner);
                break;
            case Algorithm::recombinator:
                result.outcomes[j] =
                    recombinator_kmeans(data, config.params, sample_seed, inner);
                break;
        }
        result.wall_seconds[j] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    });

    std::vector<double> losses(config.samples);
    std::vector<double> restarts(config.samples);
    for (int j = 0; j < config.samples; ++j) {
        losses[j] = result.outcomes[j].best_loss;
        restarts[j] = static_cast<double>(result.outcomes[j].total_restarts);
    }

    ExperimentSummary summary;
    summary.samples = config.samples;
    summary.loss = summarize(losses);
    summary.restarts = summarize(restarts);
    if (config.success_threshold) {
        summary.success_rate = success_fraction(losses, *config.success_threshold);
    }

    if (!pool.empty()) {
        // Cost-matched baseline: sample j's bootstrap trial draws exactly
        // R_j values from the pool and keeps the minimum.
        result.rep_losses.resize(config.samples);
        for (int j = 0; j < config.samples; ++j) {
            RngStream rng = RngStream::derived(config.master_seed, kBootstrapTag,
                                               static_cast<std::uint64_t>(j));
            result.rep_losses[j] = bootstrap_repeated(
                pool, static_cast<int>(result.outcomes[j].total_restarts), 1, rng)[0];
        }
        summary.rep_loss = summarize(result.rep_losses);
        if (config.success_threshold) {
            summary.rep_success_rate = success_fraction(result.rep_losses,
                                                        *config.success_threshold);
        }
        SummaryStats pool_stats = summarize(pool);
        summary.pool_min = pool_stats.min;
        summary.pool_median = pool_stats.median;
    }

    result.summary = summary;
    write_runs_csv((dir / "runs.csv").string(), config, result);
    write_summary_csv((dir / "summary.csv").string(), config, summary);
    return result;
}

void emit_histogram(const std::vector<double>& losses, double bin_width, const std::string& path,
                    const std::string& header_comment) {
    if (losses.empty() || !(bin_width > 0.0)) {
        throw std::invalid_argument("emit_histogram: need values and a positive bin width");
    }
    std::map<long long, std::size_t> counts;
    for (double v : losses) {
        counts[static_cast<long long>(std::floor(v / bin_width))]++;
    }
    std::ofstream out = open_out(path);
    if (!header_comment.empty()) {
        out << "# " << header_comment << '\n';
    }
    out << "bin_lower,count\n";
    const long long first = counts.begin()->first;
    const long long last = counts.rbegin()->first;
    if (last - first < 1000000) {
        for (long long b = first; b <= last; ++b) {
            const auto it = counts.find(b);
            const std::size_t c = it == counts.end() ? 0 : it->second;
            out << fmt(static_cast<double>(b) * bin_width) << ',' << c << '\n';
        }
    } else {
        // range too wide to fill the gaps; emit occupied bins only
        for (const auto& [b, c] : counts) {
            out << fmt(static_cast<double>(b) * bin_width) << ',' << c << '\n';
        }
    }
    finish(out, path);
}

void emit_density2d(const Matrix& points, double bin_size, std::size_t run_count,
                    const std::string& path, const std::string& header_comment) {
    if (points.cols() != 2) {
        throw std::invalid_argument("emit_density2d: points must be two-dimensional");
    }
    if (points.rows() == 0 || !(bin_size > 0.0) || run_count == 0) {
        throw std::invalid_argument("emit_density2d: need points, a positive bin size and runs");
    }
    std::map<std::pair<long long, long long>, std::size_t> counts;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        const long long bx = static_cast<long long>(std::floor(points(i, 0) / bin_size));
        const long long by = static_cast<long long>(std::floor(points(i, 1) / bin_size));
        counts[{bx, by}]++;
    }
    std::ofstream out = open_out(path);
    if (!header_comment.empty()) {
        out << "# " << header_comment << '\n';
    }
    out << "x_bin,y_bin,frequency\n";
    for (const auto& [bin, count] : counts) {
        out << fmt(static_cast<double>(bin.first) * bin_size) << ','
            << fmt(static_cast<double>(bin.second) * bin_size) << ','
            << fmt(static_cast<double>(count) / static_cast<double>(run_count)) << '\n';
    }
    finish(out, path);
}

void write_pool_csv(const std::string& path, const PoolResult& pool,
                    const std::string& header_comment) {
    std::ofstream out = open_out(path);
    if (!header_comment.empty()) {
        out << "# " << header_comment << '\n';
    }
    out << "run_id,loss,seed_stream\n";
    for (std::size_t i = 0; i < pool.losses.size(); ++i) {
        out << i << ',' << fmt(pool.losses[i]) << ',' << pool.stream_ids[i] << '\n';
    }
    finish(out, path);
}

void write_centroids_csv(const std::string& path, const Matrix& centroids, std::size_t k_per_run,
                         const std::string& header_comment) {
    if (k_per_run == 0 || centroids.rows() % k_per_run != 0) {
        throw std::invalid_argument("write_centroids_csv: rows must be a multiple of k");
    }
    std::ofstream out = open_out(path);
    if (!header_comment.empty()) {
        out << "# " << header_comment << '\n';
    }
    out << "run_id";
    for (std::size_t j = 0; j < centroids.cols(); ++j) {
        out << ",x" << j;
    }
    out << '\n';
    for (std::size_t i = 0; i < centroids.rows(); ++i) {
        out << i / k_per_run;
        for (std::size_t j = 0; j < centroids.cols(); ++j) {
            out << ',' << fmt(centroids(i, j));
        }
        out << '\n';
    }
    finish(out, path);
}

std::size_t CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) {
            return i;
        }
    }
    throw std::invalid_argument("CSV has no column named '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    CsvTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (start <= line.size()) {
            const std::size_t comma = line.find(',', start);
            const std::size_t end = comma == std::string::npos ? line.size() : comma;
            cells.push_back(line.substr(start, end - start));
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
        if (table.columns.empty()) {
            table.columns = std::move(cells);
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    if (table.columns.empty()) {
        throw std::runtime_error(path + ": no CSV header found");
    }
    return table;
}

std::vector<double> read_csv_column(const std::string& path, const std::string& column) {
    const CsvTable table = read_csv(path);
    const std::size_t idx = table.column_index(column);
    std::vector<double> values;
    values.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (idx >= table.rows[r].size()) {
            throw std::runtime_error(path + ": short row while reading column " + column);
        }
        try {
            values.push_back(std::stod(table.rows[r][idx]));
        } catch (const std::exception&) {
            throw std::runtime_error(path + ": non-numeric cell in column " + column);
        }
    }
    return values;
}

}  // namespace rkm
