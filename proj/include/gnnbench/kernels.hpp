#pragma once

#include "gnnbench/matrix.hpp"

namespace gnnbench::kernels {

/// Read-only CSR operand for the sparse kernels.
struct CsrView {
    index_t n_rows = 0;
    const index_t* row_ptr = nullptr;
    const index_t* col_idx = nullptr;
    const double* values = nullptr;
};

// Every kernel comes in a serial reference flavor and an OpenMP row-parallel
// flavor. Both drive the same row-block helper, so for any thread count the
// parallel result is bitwise identical to the serial one (each output row is
// accumulated in a fixed order by the same code). Tests assert exact equality;
// tools/kernel_bench times the two against each other.

namespace serial {
DenseMatrix spmm(const CsrView& a, const DenseMatrix& x);
DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b);     // A * B
DenseMatrix gemm_tn(const DenseMatrix& a, const DenseMatrix& b);  // A^T * B
DenseMatrix gemm_nt(const DenseMatrix& a, const DenseMatrix& b);  // A * B^T
} // namespace serial

namespace parallel {
DenseMatrix spmm(const CsrView& a, const DenseMatrix& x);
DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix gemm_tn(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix gemm_nt(const DenseMatrix& a, const DenseMatrix& b);
} // namespace parallel

// Default entry points used by the rest of the library (parallel flavor).
inline DenseMatrix spmm(const CsrView& a, const DenseMatrix& x) { return parallel::spmm(a, x); }
inline DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b) { return parallel::gemm(a, b); }
inline DenseMatrix gemm_tn(const DenseMatrix& a, const DenseMatrix& b) { return parallel::gemm_tn(a, b); }
inline DenseMatrix gemm_nt(const DenseMatrix& a, const DenseMatrix& b) { return parallel::gemm_nt(a, b); }

} // namespace gnnbench::kernels
