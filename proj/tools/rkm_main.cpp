#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rkm/bench.hpp"
#include "rkm/data_io.hpp"
#include "rkm/parallel.hpp"

namespace {

struct CommonOptions {
    std::string dataset;
    std::string format = "ws";
    bool unit_scale = false;
    int k = 1;
    int s = 0;
    std::uint64_t seed = 1;
    int threads = 0;
    int lloyd_max_iters = 1000;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--dataset", opt.dataset, "Path to the data file")->required();
    cmd->add_option("--format", opt.format, "Table format: ws or csv")
        ->check(CLI::IsMember({"ws", "csv"}));
    cmd->add_flag("--unit-scale", opt.unit_scale,
                  "Uniformly rescale the data to fit the unit square (one global shift+scale)");
    cmd->add_option("--k", opt.k, "Number of centroids")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--s", opt.s, "Seeding candidates per slot (default: floor(2+ln k))");
    cmd->add_option("--seed", opt.seed, "Master seed");
    cmd->add_option("--threads", opt.threads,
                    "Worker threads (default: RKM_THREADS env, then hardware)");
    cmd->add_option("--lloyd-max-iters", opt.lloyd_max_iters, "Lloyd iteration cap");
    cmd->add_option("--out", opt.out_dir, "Output directory");
}

rkm::Dataset load(const CommonOptions& opt) {
    rkm::Dataset data = rkm::load_dataset(opt.dataset, rkm::parse_format(opt.format));
    if (opt.unit_scale) {
        data = rkm::scale_to_unit_square(data);
    }
    return data;
}

std::string describe_pool(const CommonOptions& opt, int samples) {
    rkm::SchemeParams params;
    params.k = opt.k;
    params.s = opt.s;
    std::ostringstream out;
    out << "pool dataset=" << opt.dataset << " format=" << opt.format
        << " unit_scale=" << (opt.unit_scale ? 1 : 0) << " k=" << opt.k
        << " s=" << rkm::effective_s(params) << " samples=" << samples
        << " lloyd_max_iters=" << opt.lloyd_max_iters << " seed=" << opt.seed;
    return out.str();
}

int run_pool(const CommonOptions& opt, int samples, const std::string& centroids_out) {
    const rkm::Dataset data = load(opt);
    rkm::SchemeParams params;
    params.k = opt.k;
    params.s = opt.s;
    params.lloyd_max_iters = opt.lloyd_max_iters;

    const int threads = rkm::resolve_threads(opt.threads);
    const rkm::PoolResult pool = rkm::build_simple_pool(data, params, samples, opt.seed, threads,
                                                        !centroids_out.empty());

    std::filesystem::create_directories(opt.out_dir);
    const auto pool_path = std::filesystem::path(opt.out_dir) / "pool.csv";
    rkm::write_pool_csv(pool_path.string(), pool, describe_pool(opt, samples));
    if (!centroids_out.empty()) {
        rkm::write_centroids_csv(centroids_out, pool.centroids, static_cast<std::size_t>(opt.k),
                                 describe_pool(opt, samples));
    }

    const rkm::SummaryStats stats = rkm::summarize(pool.losses);
    std::printf("pool: %d runs  min=%.6g  median=%.6g  mean=%.6g  -> %s\n", samples, stats.min,
                stats.median, stats.mean, pool_path.string().c_str());
    return 0;
}

int run_experiment_cmd(const CommonOptions& opt, rkm::ExperimentConfig config) {
    config.dataset_path = opt.dataset;
    config.format = rkm::parse_format(opt.format);
    config.unit_scale = opt.unit_scale;
    config.params.k = opt.k;
    config.params.s = opt.s;
    config.params.lloyd_max_iters = opt.lloyd_max_iters;
    config.master_seed = opt.seed;
    config.out_dir = opt.out_dir;
    config.threads = rkm::resolve_threads(opt.threads);

    const rkm::Dataset data = load(opt);
    const rkm::ExperimentResult result = rkm::run_experiment(data, config);
    const rkm::ExperimentSummary& s = result.summary;

    std::printf("%s: %d samples  loss mean=%.6g std=%.3g min=%.6g median=%.6g max=%.6g\n",
                to_string(config.algorithm).c_str(), s.samples, s.loss.mean, s.loss.std_dev,
                s.loss.min, s.loss.median, s.loss.max);
    std::printf("            R mean=%.4g min=%g median=%g max=%g\n", s.restarts.mean,
                s.restarts.min, s.restarts.median, s.restarts.max);
    if (s.success_rate) {
        std::printf("            success=%.1f%%", 100.0 * *s.success_rate);
        if (s.rep_success_rate) {
            std::printf("  rep_success=%.1f%%", 100.0 * *s.rep_success_rate);
        }
        std::printf("\n");
    }
    if (s.rep_loss) {
        std::printf("            rep mean=%.6g std=%.3g  pool min=%.6g median=%.6g\n",
                    s.rep_loss->mean, s.rep_loss->std_dev, *s.pool_min, *s.pool_median);
    }
    const double wall =
        std::accumulate(result.wall_seconds.begin(), result.wall_seconds.end(), 0.0);
    std::fprintf(stderr, "timing: %.1fs total scheme time across %d samples (threads=%d)\n", wall,
                 s.samples, config.threads);
    std::printf("wrote %s/runs.csv and %s/summary.csv\n", opt.out_dir.c_str(),
                opt.out_dir.c_str());
    return 0;
}

int run_hist(const std::string& input, const std::string& mode, const std::string& column,
             double bin_width, const std::string& out_path) {
    std::ostringstream header;
    header << "hist input=" << input << " mode=" << mode << " bin=" << bin_width;
    if (mode == "loss") {
        const std::vector<double> values = rkm::read_csv_column(input, column);
        rkm::emit_histogram(values, bin_width, out_path, header.str());
        std::printf("hist: %zu values -> %s\n", values.size(), out_path.c_str());
        return 0;
    }
    // density2d over per-run centroid rows (run_id,x0,x1)
    const std::vector<double> xs = rkm::read_csv_column(input, "x0");
    const std::vector<double> ys = rkm::read_csv_column(input, "x1");
    const std::vector<double> ids = rkm::read_csv_column(input, "run_id");
    rkm::Matrix points(0, 2);
    points.reserve_rows(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double row[2] = {xs[i], ys[i]};
        points.append_row(row);
    }
    std::size_t runs = 0;
    for (double id : ids) {
        runs = std::max(runs, static_cast<std::size_t>(id) + 1);
    }
    rkm::emit_density2d(points, bin_width, runs, out_path, header.str());
    std::printf("hist: %zu centroids over %zu runs -> %s\n", xs.size(), runs, out_path.c_str());
    return 0;
}

// Renders summary CSVs side by side, optionally dividing the loss columns by
// a display scale.
int run_table(const std::vector<std::string>& paths, double scale) {
    std::printf("%-13s %5s %5s %6s | %9s %8s | %12s %12s %12s %12s %8s | %12s %12s\n", "alg", "k",
                "J", "beta", "R_mean", "R_std", "loss_mean", "loss_std", "loss_min", "loss_median",
                "success", "pool_min", "pool_median");
    for (const std::string& path : paths) {
        const rkm::CsvTable table = rkm::read_csv(path);
        const auto cell = [&](const std::string& name, std::size_t row) {
            return table.rows[row][table.column_index(name)];
        };
        const auto num = [&](const std::string& name, std::size_t row) -> std::optional<double> {
            const std::string& c = cell(name, row);
            if (c.empty()) {
                return std::nullopt;
            }
            return std::stod(c);
        };
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto scaled = [&](const char* name, const char* format_spec) -> std::string {
                const auto v = num(name, r);
                if (!v) {
                    return "-";
                }
                char buf[40];
                std::snprintf(buf, sizeof(buf), format_spec, *v / scale);
                return buf;
            };
            const auto success = num("success_rate", r);
            const std::string success_str =
                success ? std::to_string(static_cast<int>(100.0 * *success + 0.5)) + "%" : "-";
            std::printf("%-13s %5s %5s %6s | %9.1f %8.1f | %12s %12s %12s %12s %8s | %12s %12s\n",
                        cell("alg", r).c_str(), cell("k", r).c_str(), cell("J", r).c_str(),
                        cell("beta", r).c_str(), num("R_mean", r).value_or(0),
                        num("R_std", r).value_or(0), scaled("loss_mean", "%.6g").c_str(),
                        scaled("loss_std", "%.3g").c_str(), scaled("loss_min", "%.6g").c_str(),
                        scaled("loss_median", "%.6g").c_str(), success_str.c_str(),
                        scaled("pool_min", "%.6g").c_str(), scaled("pool_median", "%.6g").c_str());
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recombinator k-means benchmark harness"};
    app.require_subcommand(1);

    CommonOptions pool_opt;
    int pool_samples = 1000;
    std::string centroids_out;
    CLI::App* pool = app.add_subcommand("pool", "Collect independent simple-kmeans losses");
    add_common(pool, pool_opt);
    pool->add_option("--samples", pool_samples, "Pool size")->check(CLI::PositiveNumber);
    pool->add_option("--centroids-out", centroids_out,
                     "Also dump every run's final centroids to this CSV");

    CommonOptions run_opt;
    rkm::ExperimentConfig config;
    std::string alg = "recombinator";
    double success_threshold = 0.0;
    CLI::App* run = app.add_subcommand("run", "Run an experiment and summarize it");
    add_common(run, run_opt);
    run->add_option("--alg", alg, "simple, repeated or recombinator")
        ->check(CLI::IsMember({"simple", "repeated", "recombinator"}));
    run->add_option("--J", config.params.restarts_per_batch, "Restarts per batch")
        ->check(CLI::PositiveNumber);
    run->add_option("--beta", config.params.beta, "Weight skew (0 = flat)");
    run->add_option("--R", config.repeated_restarts, "Restarts for --alg repeated");
    run->add_option("--samples", config.samples, "Outcomes to collect")
        ->check(CLI::PositiveNumber);
    run->add_option("--pool", config.pool_path, "Loss pool CSV for the cost-matched baseline");
    run->add_option("--pool-size", config.pool_size,
                    "Build a simple-kmeans pool of this size when --pool is not given");
    run->add_option("--rtol", config.params.rtol_stop, "Batch collapse tolerance");
    run->add_option("--max-batches", config.params.max_batches, "Batch cap")
        ->check(CLI::PositiveNumber);
    run->add_option("--success-threshold", success_threshold,
                    "Loss level counting as success");

    std::string hist_input;
    std::string hist_mode = "loss";
    std::string hist_column = "loss";
    double bin_width = 0.0;
    std::string hist_out = "hist.csv";
    CLI::App* hist = app.add_subcommand("hist", "Emit a histogram CSV from results");
    hist->add_option("--input", hist_input, "Input CSV (pool/runs or centroids)")->required();
    hist->add_option("--mode", hist_mode, "loss or density2d")
        ->check(CLI::IsMember({"loss", "density2d"}));
    hist->add_option("--column", hist_column, "Value column for loss mode");
    hist->add_option("--bin-width", bin_width, "Bin width")->required();
    hist->add_option("--out", hist_out, "Output CSV path");

    std::vector<std::string> table_paths;
    double table_scale = 1.0;
    CLI::App* table = app.add_subcommand("table", "Print summary CSVs as a table");
    table->add_option("--summary", table_paths, "summary.csv paths")->required();
    table->add_option("--scale", table_scale, "Display divisor for loss columns");

    CLI11_PARSE(app, argc, argv);

    try {
        if (pool->parsed()) {
            return run_pool(pool_opt, pool_samples, centroids_out);
        }
        if (run->parsed()) {
            config.algorithm = rkm::parse_algorithm(alg);
            if (run->count("--success-threshold") > 0) {
                config.success_threshold = success_threshold;
            }
            return run_experiment_cmd(run_opt, config);
        }
        if (hist->parsed()) {
            return run_hist(hist_input, hist_mode, hist_column, bin_width, hist_out);
        }
        if (table->parsed()) {
            return run_table(table_paths, table_scale);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
