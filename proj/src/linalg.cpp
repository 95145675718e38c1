#include "gnnbench/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gnnbench::linalg {

void lu_solve_inplace(DenseMatrix& a, DenseMatrix& b) {
    if (a.rows != a.cols) throw std::invalid_argument("lu_solve: A must be square");
    if (b.rows != a.rows) throw std::invalid_argument("lu_solve: B row count mismatch");
    const index_t n = a.rows, m = b.cols;

    for (index_t k = 0; k < n; ++k) {
        index_t piv = k;
        double best = std::fabs(a(k, k));
        for (index_t i = k + 1; i < n; ++i) {
            const double v = std::fabs(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best))
            throw std::runtime_error("lu_solve: singular system at column " + std::to_string(k));
        if (piv != k) {
            for (index_t j = k; j < n; ++j) std::swap(a(k, j), a(piv, j));
            for (index_t j = 0; j < m; ++j) std::swap(b(k, j), b(piv, j));
        }
        const double inv_pivot = 1.0 / a(k, k);
        for (index_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) * inv_pivot;
            if (f == 0.0) continue;
            a(i, k) = 0.0;
            for (index_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            for (index_t j = 0; j < m; ++j) b(i, j) -= f * b(k, j);
        }
    }
    // back substitution
    for (index_t i = n - 1; i >= 0; --i) {
        const double inv_diag = 1.0 / a(i, i);
        for (index_t j = 0; j < m; ++j) {
            double s = b(i, j);
            for (index_t k = i + 1; k < n; ++k) s -= a(i, k) * b(k, j);
            b(i, j) = s * inv_diag;
        }
    }
}

std::vector<double> sym_eigenvalues(DenseMatrix a) {
    if (a.rows != a.cols) throw std::invalid_argument("sym_eigenvalues: matrix must be square");
    const index_t n = a.rows;

    auto off_diag_norm = [&]() {
        double s = 0.0;
        for (index_t i = 0; i < n; ++i)
            for (index_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
        return std::sqrt(2.0 * s);
    };

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_diag_norm() > 1e-13; ++sweep) {
        for (index_t p = 0; p < n - 1; ++p) {
            for (index_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (index_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (index_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> eig(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

} // namespace gnnbench::linalg
