#include "rkm/core.hpp"

#include <limits>
#include <stdexcept>

namespace rkm {

namespace {

void check_dims(const Dataset& data, const Configuration& config) {
    if (config.k() == 0) {
        throw std::invalid_argument("configuration has no centroids");
    }
    if (config.dim() != data.dim()) {
        throw std::invalid_argument("centroid dimensionality does not match dataset");
    }
}

struct Nearest {
    std::uint32_t index;
    double dist_sq;
};

Nearest nearest_centroid(std::span<const double> x, const Matrix& centroids) {
    const std::size_t k = centroids.rows();
    const std::size_t d = centroids.cols();
    Nearest best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t a = 0; a < k; ++a) {
        const double* c = centroids.row(a).data();
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = x[j] - c[j];
            s += diff * diff;
        }
        if (s < best.dist_sq) {
            best.index = static_cast<std::uint32_t>(a);
            best.dist_sq = s;
        }
    }
    return best;
}

}  // namespace

double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("squared_distance: dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        s += diff * diff;
    }
    return s;
}

Assignment assign(const Dataset& data, const Configuration& config) {
    check_dims(data, config);
    const std::size_t n = data.n();
    Assignment out;
    out.labels.resize(n);
    out.dist_sq.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Nearest hit = nearest_centroid(data.point(i), config.centroids);
        out.labels[i] = hit.index;
        out.dist_sq[i] = hit.dist_sq;
    }
    return out;
}

double loss(const Dataset& data, const Configuration& config) {
    check_dims(data, config);
    double total = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
        total += nearest_centroid(data.point(i), config.centroids).dist_sq;
    }
    return total;
}

}  // namespace rkm
