#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace gnnbench {

using index_t = std::int64_t;

/// Dense row-major matrix of 64-bit reals. The one value type every feature
/// matrix, weight matrix and gradient in the project uses.
struct DenseMatrix {
    index_t rows = 0;
    index_t cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;

    DenseMatrix(index_t r, index_t c, double fill = 0.0)
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {
        if (r < 0 || c < 0) throw std::invalid_argument("DenseMatrix: negative dimension");
    }

    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> init) {
        DenseMatrix m;
        m.rows = static_cast<index_t>(init.size());
        m.cols = m.rows > 0 ? static_cast<index_t>(init.begin()->size()) : 0;
        m.data.reserve(static_cast<std::size_t>(m.rows * m.cols));
        for (const auto& row : init) {
            if (static_cast<index_t>(row.size()) != m.cols)
                throw std::invalid_argument("DenseMatrix::from_rows: ragged rows");
            m.data.insert(m.data.end(), row.begin(), row.end());
        }
        return m;
    }

    double& operator()(index_t i, index_t j) { return data[static_cast<std::size_t>(i * cols + j)]; }
    double operator()(index_t i, index_t j) const { return data[static_cast<std::size_t>(i * cols + j)]; }

    double* row(index_t i) { return data.data() + i * cols; }
    const double* row(index_t i) const { return data.data() + i * cols; }

    index_t size() const { return rows * cols; }

    bool same_shape(const DenseMatrix& o) const { return rows == o.rows && cols == o.cols; }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }
};

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        m = std::max(m, std::fabs(a.data[i] - b.data[i]));
    return m;
}

inline double max_abs(const DenseMatrix& a) {
    double m = 0.0;
    for (double v : a.data) m = std::max(m, std::fabs(v));
    return m;
}

} // namespace gnnbench
