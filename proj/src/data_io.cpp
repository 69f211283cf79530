#include "rkm/data_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace rkm {

namespace {

std::runtime_error parse_error(const std::string& path, std::size_t line, const std::string& what) {
    std::ostringstream msg;
    msg << path << ":" << line << ": " << what;
    return std::runtime_error(msg.str());
}

// Splits one line into numeric fields. CSV mode splits on commas; whitespace
// mode on any run of spaces/tabs. Carriage returns are tolerated.
std::vector<double> parse_line(const std::string& raw, TableFormat format,
                               const std::string& path, std::size_t line_no) {
    std::vector<double> fields;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }

    std::vector<std::string> tokens;
    if (format == TableFormat::csv) {
        std::size_t start = 0;
        while (start <= line.size()) {
            const std::size_t comma = line.find(',', start);
            const std::size_t end = comma == std::string::npos ? line.size() : comma;
            tokens.push_back(line.substr(start, end - start));
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
    } else {
        std::istringstream in(line);
        std::string tok;
        while (in >> tok) {
            tokens.push_back(tok);
        }
    }

    for (const std::string& tok : tokens) {
        errno = 0;
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0' || errno == ERANGE) {
            throw parse_error(path, line_no, "non-numeric field '" + tok + "'");
        }
        if (!std::isfinite(v)) {
            throw parse_error(path, line_no, "non-finite value '" + tok + "'");
        }
        fields.push_back(v);
    }
    return fields;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

TableFormat parse_format(const std::string& name) {
    if (name == "ws" || name == "whitespace") {
        return TableFormat::whitespace;
    }
    if (name == "csv") {
        return TableFormat::csv;
    }
    throw std::invalid_argument("unknown table format '" + name + "' (expected ws or csv)");
}

Dataset load_dataset(const std::string& path, TableFormat format) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }

    Matrix points;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) {
            continue;
        }
        const std::vector<double> fields = parse_line(line, format, path, line_no);
        if (fields.empty()) {
            throw parse_error(path, line_no, "no numeric fields");
        }
        if (points.rows() == 0) {
            width = fields.size();
        } else if (fields.size() != width) {
            std::ostringstream msg;
            msg << "ragged row: got " << fields.size() << " fields, expected " << width;
            throw parse_error(path, line_no, msg.str());
        }
        points.append_row(fields);
    }
    if (points.rows() == 0) {
        throw parse_error(path, line_no, "file contains no data");
    }
    return Dataset(std::move(points));
}

void save_matrix(const std::string& path, const Matrix& m, TableFormat format) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    const char sep = format == TableFormat::csv ? ',' : ' ';
    char buf[40];
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            if (j > 0) {
                out << sep;
            }
            out << buf;
        }
        out << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed for " + path);
    }
}

UnitScaling compute_unit_scaling(const Dataset& data) {
    const auto& values = data.points().values();
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) {
        throw std::invalid_argument("unit scaling undefined for constant data");
    }
    return UnitScaling{*lo, 1.0 / (*hi - *lo)};
}

Matrix apply_scaling(const Matrix& m, const UnitScaling& scaling) {
    Matrix out = m;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        for (std::size_t j = 0; j < out.cols(); ++j) {
            out(i, j) = (out(i, j) - scaling.offset) * scaling.inv_range;
        }
    }
    return out;
}

Dataset scale_to_unit_square(const Dataset& data) {
    return Dataset(apply_scaling(data.points(), compute_unit_scaling(data)));
}

}  // namespace rkm
