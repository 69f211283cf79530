#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rkm {

/// Dense row-major matrix of doubles. Rows are points.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : values_(rows * cols, fill), rows_(rows), cols_(cols) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }

    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) {
        return {values_.data() + i * cols_, cols_};
    }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

    const std::vector<double>& values() const { return values_; }

    void reserve_rows(std::size_t n) { values_.reserve(n * cols_); }

    /// Appends a copy of `point` as a new row. Sets the column count on the
    /// first append of an empty matrix; afterwards the width must match.
    void append_row(std::span<const double> point);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::vector<double> values_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
};

/// Immutable collection of N points in d dimensions. Construction rejects
/// empty input and non-finite coordinates.
class Dataset {
public:
    explicit Dataset(Matrix points);

    std::size_t n() const { return points_.rows(); }
    std::size_t dim() const { return points_.cols(); }
    std::span<const double> point(std::size_t i) const { return points_.row(i); }
    const Matrix& points() const { return points_; }

private:
    Matrix points_;
};

/// k centroids plus the optionally cached loss against some dataset.
struct Configuration {
    Matrix centroids;
    std::optional<double> loss;

    std::size_t k() const { return centroids.rows(); }
    std::size_t dim() const { return centroids.cols(); }
};

/// Per-point nearest-centroid labels and squared distances.
struct Assignment {
    std::vector<std::uint32_t> labels;
    std::vector<double> dist_sq;
};

}  // namespace rkm
