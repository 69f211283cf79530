#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rkm/bench.hpp"
#include "rkm/core.hpp"
#include "rkm/data_io.hpp"
#include "rkm/lloyd.hpp"
#include "rkm/schemes.hpp"
#include "rkm/seeding.hpp"

namespace py = pybind11;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

rkm::Matrix to_matrix(const DoubleArray& array) {
    if (array.ndim() != 2) {
        throw std::invalid_argument("expected a 2-d array");
    }
    const auto rows = static_cast<std::size_t>(array.shape(0));
    const auto cols = static_cast<std::size_t>(array.shape(1));
    std::vector<double> values(array.data(), array.data() + rows * cols);
    return rkm::Matrix(rows, cols, std::move(values));
}

py::array from_matrix(const rkm::Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    std::copy(m.values().begin(), m.values().end(), out.mutable_data());
    return out;
}

rkm::SchemeParams make_params(int k, int s, int J, double beta, double rtol, int max_batches,
                              int lloyd_max_iters) {
    rkm::SchemeParams params;
    params.k = k;
    params.s = s;
    params.restarts_per_batch = J;
    params.beta = beta;
    params.rtol_stop = rtol;
    params.max_batches = max_batches;
    params.lloyd_max_iters = lloyd_max_iters;
    return params;
}

py::dict outcome_to_dict(const rkm::SchemeOutcome& outcome) {
    py::list batches;
    for (const rkm::BatchRecord& b : outcome.batches) {
        py::dict rec;
        rec["batch"] = b.batch_index;
        rec["losses"] = b.losses;
        rec["min"] = b.min_loss;
        rec["mean"] = b.mean_loss;
        rec["best_so_far"] = b.best_loss_so_far;
        batches.append(rec);
    }
    py::dict out;
    out["centroids"] = from_matrix(outcome.best.centroids);
    out["loss"] = outcome.best_loss;
    out["total_restarts"] = outcome.total_restarts;
    out["batches"] = batches;
    out["stop_reason"] = rkm::to_string(outcome.stop_reason);
    return out;
}

}  // namespace

PYBIND11_MODULE(_rkm, m) {
    m.doc() = "Recombinator k-means: batched-restart k-means seeded from pools of previous runs";

    py::class_<rkm::Dataset>(m, "Dataset")
        .def(py::init([](const DoubleArray& points) { return rkm::Dataset(to_matrix(points)); }),
             py::arg("points"))
        .def_property_readonly("n", &rkm::Dataset::n)
        .def_property_readonly("dim", &rkm::Dataset::dim)
        .def_property_readonly("points",
                               [](const rkm::Dataset& d) { return from_matrix(d.points()); });

    m.def(
        "load_dataset",
        [](const std::string& path, const std::string& format) {
            return rkm::load_dataset(path, rkm::parse_format(format));
        },
        py::arg("path"), py::arg("format") = "ws");

    m.def("scale_to_unit_square",
          [](const rkm::Dataset& data) { return rkm::scale_to_unit_square(data); });

    m.def("squared_distance", [](const std::vector<double>& a, const std::vector<double>& b) {
        return rkm::squared_distance(a, b);
    });

    m.def(
        "loss",
        [](const rkm::Dataset& data, const DoubleArray& centroids) {
            return rkm::loss(data, rkm::Configuration{to_matrix(centroids), std::nullopt});
        },
        py::arg("data"), py::arg("centroids"));

    m.def(
        "assign",
        [](const rkm::Dataset& data, const DoubleArray& centroids) {
            const rkm::Assignment a =
                rkm::assign(data, rkm::Configuration{to_matrix(centroids), std::nullopt});
            return py::make_tuple(py::cast(a.labels), py::cast(a.dist_sq));
        },
        py::arg("data"), py::arg("centroids"));

    m.def("default_s", &rkm::default_s, py::arg("k"));

    m.def(
        "basic_kmeanspp",
        [](const rkm::Dataset& data, int k, std::uint64_t seed) {
            rkm::RngStream rng(seed);
            return from_matrix(rkm::basic_kmeanspp(data, k, rng).centroids);
        },
        py::arg("data"), py::arg("k"), py::arg("seed"));

    m.def(
        "greedy_kmeanspp",
        [](const rkm::Dataset& data, int k, int s, std::uint64_t seed) {
            rkm::RngStream rng(seed);
            const int eff = s > 0 ? s : rkm::default_s(k);
            return from_matrix(rkm::greedy_kmeanspp(data, k, eff, rng).centroids);
        },
        py::arg("data"), py::arg("k"), py::arg("s") = 0, py::arg("seed") = 1);

    m.def(
        "reservoir_kmeanspp",
        [](const DoubleArray& pool, const std::vector<double>& weights, const rkm::Dataset& data,
           int k, int s, std::uint64_t seed) {
            rkm::RngStream rng(seed);
            const rkm::Reservoir res{to_matrix(pool), weights};
            const int eff = s > 0 ? s : rkm::default_s(k);
            return from_matrix(rkm::reservoir_kmeanspp(res, data, k, eff, rng).centroids);
        },
        py::arg("pool"), py::arg("weights"), py::arg("data"), py::arg("k"), py::arg("s") = 0,
        py::arg("seed") = 1);

    m.def("compute_weights", &rkm::compute_weights, py::arg("losses"), py::arg("beta"));

    m.def(
        "run_lloyd",
        [](const rkm::Dataset& data, const DoubleArray& init, int max_iters) {
            const rkm::LloydOutcome out =
                rkm::run_lloyd(data, rkm::Configuration{to_matrix(init), std::nullopt}, max_iters);
            py::dict d;
            d["centroids"] = from_matrix(out.final.centroids);
            d["loss"] = *out.final.loss;
            d["iterations"] = out.iterations;
            d["converged"] = out.converged;
            d["empty_cluster_repairs"] = out.empty_cluster_repairs;
            return d;
        },
        py::arg("data"), py::arg("init"), py::arg("max_iters") = 1000);

    m.def(
        "simple_kmeans",
        [](const rkm::Dataset& data, int k, int s, std::uint64_t seed, int lloyd_max_iters) {
            rkm::RngStream rng(seed);
            const rkm::SchemeParams params = make_params(k, s, 1, 0.0, 1e-4, 1, lloyd_max_iters);
            rkm::RunResult run;
            {
                py::gil_scoped_release release;
                run = rkm::simple_kmeans(data, params, rng);
            }
            py::dict d;
            d["centroids"] = from_matrix(run.config.centroids);
            d["loss"] = run.loss;
            d["lloyd_iterations"] = run.lloyd_iterations;
            d["lloyd_converged"] = run.lloyd_converged;
            return d;
        },
        py::arg("data"), py::arg("k"), py::arg("s") = 0, py::arg("seed") = 1,
        py::arg("lloyd_max_iters") = 1000);

    m.def(
        "repeated_kmeans",
        [](const rkm::Dataset& data, int k, int restarts, int s, std::uint64_t seed, int threads,
           int lloyd_max_iters) {
            const rkm::SchemeParams params = make_params(k, s, 1, 0.0, 1e-4, 1, lloyd_max_iters);
            rkm::SchemeOutcome outcome;
            {
                py::gil_scoped_release release;
                outcome = rkm::repeated_kmeans(data, params, restarts, seed, threads);
            }
            return outcome_to_dict(outcome);
        },
        py::arg("data"), py::arg("k"), py::arg("restarts"), py::arg("s") = 0, py::arg("seed") = 1,
        py::arg("threads") = 1, py::arg("lloyd_max_iters") = 1000);

    m.def(
        "recombinator_kmeans",
        [](const rkm::Dataset& data, int k, int J, double beta, int s, double rtol,
           int max_batches, std::uint64_t seed, int threads, int lloyd_max_iters) {
            const rkm::SchemeParams params =
                make_params(k, s, J, beta, rtol, max_batches, lloyd_max_iters);
            rkm::SchemeOutcome outcome;
            {
                py::gil_scoped_release release;
                outcome = rkm::recombinator_kmeans(data, params, seed, threads);
            }
            return outcome_to_dict(outcome);
        },
        py::arg("data"), py::arg("k"), py::arg("J") = 10, py::arg("beta") = 5.0, py::arg("s") = 0,
        py::arg("rtol") = 1e-4, py::arg("max_batches") = 100, py::arg("seed") = 1,
        py::arg("threads") = 1, py::arg("lloyd_max_iters") = 1000);

    m.def(
        "bootstrap_repeated",
        [](const std::vector<double>& pool, int restarts, int trials, std::uint64_t seed) {
            rkm::RngStream rng(seed);
            return rkm::bootstrap_repeated(pool, restarts, trials, rng);
        },
        py::arg("pool"), py::arg("restarts"), py::arg("trials"), py::arg("seed") = 1);
}
