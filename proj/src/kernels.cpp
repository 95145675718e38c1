#include "gnnbench/kernels.hpp"

#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gnnbench::kernels {

#if defined(__GNUC__)
#define GNNBENCH_NOINLINE __attribute__((noinline))
#else
#define GNNBENCH_NOINLINE
#endif

namespace {

// Row-block bodies shared by the serial and parallel drivers. noinline keeps
// the compiled loop identical in both callers, which is what makes the
// serial/parallel bitwise-equality contract safe to test exactly.

GNNBENCH_NOINLINE void spmm_rows(const CsrView& a, const DenseMatrix& x, DenseMatrix& out,
                                 index_t r0, index_t r1) {
    const index_t c = x.cols;
    for (index_t i = r0; i < r1; ++i) {
        double* out_row = out.row(i);
        for (index_t j = 0; j < c; ++j) out_row[j] = 0.0;
        for (index_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
            const double w = a.values[p];
            const double* x_row = x.row(a.col_idx[p]);
            for (index_t j = 0; j < c; ++j) out_row[j] += w * x_row[j];
        }
    }
}

GNNBENCH_NOINLINE void gemm_rows(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out,
                                 index_t r0, index_t r1) {
    const index_t k_dim = a.cols, n = b.cols;
    for (index_t i = r0; i < r1; ++i) {
        double* out_row = out.row(i);
        for (index_t j = 0; j < n; ++j) out_row[j] = 0.0;
        const double* a_row = a.row(i);
        for (index_t k = 0; k < k_dim; ++k) {
            const double av = a_row[k];
            const double* b_row = b.row(k);
            for (index_t j = 0; j < n; ++j) out_row[j] += av * b_row[j];
        }
    }
}

// out rows [r0,r1) of A^T * B, accumulated k-outer so each thread streams its
// column block of A and all of B; per-element order matches the serial pass.
GNNBENCH_NOINLINE void gemm_tn_rows(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out,
                                    index_t r0, index_t r1) {
    const index_t k_dim = a.rows, n = b.cols;
    for (index_t i = r0; i < r1; ++i) {
        double* out_row = out.row(i);
        for (index_t j = 0; j < n; ++j) out_row[j] = 0.0;
    }
    for (index_t k = 0; k < k_dim; ++k) {
        const double* a_row = a.row(k);
        const double* b_row = b.row(k);
        for (index_t i = r0; i < r1; ++i) {
            const double av = a_row[i];
            double* out_row = out.row(i);
            for (index_t j = 0; j < n; ++j) out_row[j] += av * b_row[j];
        }
    }
}

GNNBENCH_NOINLINE void gemm_nt_rows(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out,
                                    index_t r0, index_t r1) {
    const index_t k_dim = a.cols, n = b.rows;
    for (index_t i = r0; i < r1; ++i) {
        const double* a_row = a.row(i);
        double* out_row = out.row(i);
        for (index_t j = 0; j < n; ++j) {
            const double* b_row = b.row(j);
            double acc = 0.0;
            for (index_t k = 0; k < k_dim; ++k) acc += a_row[k] * b_row[k];
            out_row[j] = acc;
        }
    }
}

void check_spmm(const CsrView& a, const DenseMatrix& x) {
    if (x.rows != a.n_rows) throw std::invalid_argument("spmm: x.rows != adjacency n_rows");
}
void check_gemm(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("gemm: inner dimension mismatch");
}
void check_gemm_tn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows != b.rows) throw std::invalid_argument("gemm_tn: inner dimension mismatch");
}
void check_gemm_nt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.cols) throw std::invalid_argument("gemm_nt: inner dimension mismatch");
}

template <typename Body>
void run_row_blocks(index_t n_rows, Body&& body) {
#ifdef _OPENMP
#pragma omp parallel
    {
        const index_t nt = omp_get_num_threads();
        const index_t tid = omp_get_thread_num();
        const index_t chunk = (n_rows + nt - 1) / nt;
        const index_t r0 = std::min(tid * chunk, n_rows);
        const index_t r1 = std::min(r0 + chunk, n_rows);
        if (r0 < r1) body(r0, r1);
    }
#else
    body(0, n_rows);
#endif
}

} // namespace

namespace serial {

DenseMatrix spmm(const CsrView& a, const DenseMatrix& x) {
    check_spmm(a, x);
    DenseMatrix out(a.n_rows, x.cols);
    spmm_rows(a, x, out, 0, a.n_rows);
    return out;
}

DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b) {
    check_gemm(a, b);
    DenseMatrix out(a.rows, b.cols);
    gemm_rows(a, b, out, 0, a.rows);
    return out;
}

DenseMatrix gemm_tn(const DenseMatrix& a, const DenseMatrix& b) {
    check_gemm_tn(a, b);
    DenseMatrix out(a.cols, b.cols);
    gemm_tn_rows(a, b, out, 0, a.cols);
    return out;
}

DenseMatrix gemm_nt(const DenseMatrix& a, const DenseMatrix& b) {
    check_gemm_nt(a, b);
    DenseMatrix out(a.rows, b.rows);
    gemm_nt_rows(a, b, out, 0, a.rows);
    return out;
}

} // namespace serial

namespace parallel {

DenseMatrix spmm(const CsrView& a, const DenseMatrix& x) {
    check_spmm(a, x);
    DenseMatrix out(a.n_rows, x.cols);
    run_row_blocks(a.n_rows, [&](index_t r0, index_t r1) { spmm_rows(a, x, out, r0, r1); });
    return out;
}

DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b) {
    check_gemm(a, b);
    DenseMatrix out(a.rows, b.cols);
    run_row_blocks(a.rows, [&](index_t r0, index_t r1) { gemm_rows(a, b, out, r0, r1); });
    return out;
}

DenseMatrix gemm_tn(const DenseMatrix& a, const DenseMatrix& b) {
    check_gemm_tn(a, b);
    DenseMatrix out(a.cols, b.cols);
    run_row_blocks(a.cols, [&](index_t r0, index_t r1) { gemm_tn_rows(a, b, out, r0, r1); });
    return out;
}

DenseMatrix gemm_nt(const DenseMatrix& a, const DenseMatrix& b) {
    check_gemm_nt(a, b);
    DenseMatrix out(a.rows, b.rows);
    run_row_blocks(a.rows, [&](index_t r0, index_t r1) { gemm_nt_rows(a, b, out, r0, r1); });
    return out;
}

} // namespace parallel

} // namespace gnnbench::kernels
