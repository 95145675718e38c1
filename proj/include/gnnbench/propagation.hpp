#pragma once

#include "gnnbench/graph.hpp"
#include "gnnbench/matrix.hpp"

namespace gnnbench {

/// One-hop propagation: out = adj * x.
DenseMatrix spmm(const NormalizedAdjacency& adj, const DenseMatrix& x);

/// K repeated one-hop propagations; k = 0 returns x unchanged.
DenseMatrix propagate_power(const NormalizedAdjacency& adj, const DenseMatrix& x, int k);

struct PprResult {
    DenseMatrix z;
    double residual = 0.0;  // max-norm of the last iterate difference
    int iters_run = 0;
    bool converged = false;
};

/// Personalized-PageRank propagation alpha * (I - (1-alpha) adj)^{-1} x,
/// approximated by the fixed-point iteration
///   Z^0 = X,  Z^{t+1} = (1-alpha) adj Z^t + alpha X,
/// stopping when the max-norm residual drops to tol or iters is exhausted.
/// Non-convergence is reported through the result, not an error.
PprResult propagate_ppr(const NormalizedAdjacency& adj, const DenseMatrix& x, double alpha,
                        int iters, double tol);

/// Exact dense solve of (I - (1-alpha) adj) Z = alpha X; the small-instance
/// oracle for propagate_ppr. Refuses graphs larger than max_nodes.
DenseMatrix ppr_exact_dense(const NormalizedAdjacency& adj, const DenseMatrix& x, double alpha,
                            index_t max_nodes = 2000);

} // namespace gnnbench
