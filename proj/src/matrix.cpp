#include "rkm/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace rkm {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : values_(std::move(values)), rows_(rows), cols_(cols) {
    if (values_.size() != rows * cols) {
        throw std::invalid_argument("Matrix: value count does not match rows*cols");
    }
}

void Matrix::append_row(std::span<const double> point) {
    if (rows_ == 0 && cols_ == 0) {
        cols_ = point.size();
    }
    if (point.size() != cols_) {
        throw std::invalid_argument("Matrix::append_row: width mismatch");
    }
    values_.insert(values_.end(), point.begin(), point.end());
    ++rows_;
}

Dataset::Dataset(Matrix points) : points_(std::move(points)) {
    if (points_.rows() == 0 || points_.cols() == 0) {
        throw std::invalid_argument("Dataset: need at least one point and one dimension");
    }
    for (double v : points_.values()) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("Dataset: coordinates must be finite");
        }
    }
}

}  // namespace rkm
