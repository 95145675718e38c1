#include "gnnbench/propagation.hpp"

#include "gnnbench/kernels.hpp"
#include "gnnbench/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace gnnbench {

DenseMatrix spmm(const NormalizedAdjacency& adj, const DenseMatrix& x) {
    return kernels::spmm(adj.view(), x);
}

DenseMatrix propagate_power(const NormalizedAdjacency& adj, const DenseMatrix& x, int k) {
    if (k < 0) throw std::invalid_argument("propagate_power: k must be >= 0");
    if (x.rows != adj.n_nodes) throw std::invalid_argument("propagate_power: x.rows mismatch");
    DenseMatrix z = x;
    for (int i = 0; i < k; ++i) z = kernels::spmm(adj.view(), z);
    return z;
}

PprResult propagate_ppr(const NormalizedAdjacency& adj, const DenseMatrix& x, double alpha,
                        int iters, double tol) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("propagate_ppr: alpha must be in (0,1]");
    if (iters < 1) throw std::invalid_argument("propagate_ppr: iters must be >= 1");
    if (x.rows != adj.n_nodes) throw std::invalid_argument("propagate_ppr: x.rows mismatch");

    PprResult res;
    res.z = x;
    const double beta = 1.0 - alpha;
    for (int t = 0; t < iters; ++t) {
        DenseMatrix az = kernels::spmm(adj.view(), res.z);
        double resid = 0.0;
        for (std::size_t i = 0; i < az.data.size(); ++i) {
            const double next = beta * az.data[i] + alpha * x.data[i];
            resid = std::max(resid, std::fabs(next - res.z.data[i]));
            az.data[i] = next;
        }
        res.z = std::move(az);
        res.residual = resid;
        res.iters_run = t + 1;
        if (resid <= tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

DenseMatrix ppr_exact_dense(const NormalizedAdjacency& adj, const DenseMatrix& x, double alpha,
                            index_t max_nodes) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("ppr_exact_dense: alpha must be in (0,1]");
    if (adj.n_nodes > max_nodes)
        throw std::invalid_argument("ppr_exact_dense: graph exceeds max_nodes (" +
                                    std::to_string(max_nodes) + ")");
    if (x.rows != adj.n_nodes) throw std::invalid_argument("ppr_exact_dense: x.rows mismatch");

    // M = I - (1-alpha) * adj; nonsingular for alpha > 0 since eig(adj) in [-1,1]
    DenseMatrix m(adj.n_nodes, adj.n_nodes);
    for (index_t i = 0; i < adj.n_nodes; ++i) m(i, i) = 1.0;
    const double beta = 1.0 - alpha;
    for (index_t i = 0; i < adj.n_nodes; ++i)
        for (index_t p = adj.row_ptr[i]; p < adj.row_ptr[i + 1]; ++p)
            m(i, adj.col_idx[p]) -= beta * adj.values[p];

    DenseMatrix rhs = x;
    for (double& v : rhs.data) v *= alpha;
    linalg::lu_solve_inplace(m, rhs);
    return rhs;
}

} // namespace gnnbench
