#pragma once

#include <string>

#include "rkm/matrix.hpp"

namespace rkm {

enum class TableFormat { whitespace, csv };

TableFormat parse_format(const std::string& name);  // "ws" or "csv"

/// Parses a plain-text numeric table, one point per line. Blank lines are
/// skipped; ragged rows, non-numeric fields and empty files fail with the
/// offending line number. No normalization is applied.
Dataset load_dataset(const std::string& path, TableFormat format);

/// Writes the matrix back out with 17 significant digits, so a reload
/// reproduces it bit for bit.
void save_matrix(const std::string& path, const Matrix& m, TableFormat format);

/// One global shift and one scalar scale applied to every coordinate.
struct UnitScaling {
    double offset = 0.0;   // min over all coordinates of all dimensions
    double inv_range = 1.0;  // 1 / (max - min)
};

/// Transform that maps the dataset's global coordinate range onto [0, 1],
/// preserving the aspect ratio. Throws for constant data.
UnitScaling compute_unit_scaling(const Dataset& data);

Matrix apply_scaling(const Matrix& m, const UnitScaling& scaling);

/// Convenience: compute_unit_scaling + apply_scaling on the same dataset.
Dataset scale_to_unit_square(const Dataset& data);

}  // namespace rkm
