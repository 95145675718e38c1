#pragma once

#include "gnnbench/kernels.hpp"
#include "gnnbench/matrix.hpp"

#include <optional>
#include <vector>

namespace gnnbench {

/// Symmetric weighted adjacency in CSR form. No self-loops, no duplicate
/// entries, columns sorted within each row.
struct SparseGraph {
    index_t n_nodes = 0;
    std::vector<index_t> row_ptr;  // length n_nodes + 1
    std::vector<index_t> col_idx;
    std::vector<double> values;    // positive edge weights

    index_t nnz() const { return static_cast<index_t>(col_idx.size()); }
};

struct Edge {
    index_t src = 0;
    index_t dst = 0;
    std::optional<double> weight;  // defaults to 1
};

/// Build a SparseGraph from an edge list. Input edges may list each undirected
/// edge once or in both directions; every listed edge contributes its weight
/// to both orientations, duplicates are summed, self-loops are dropped.
SparseGraph from_edge_list(const std::vector<Edge>& edges, index_t n_nodes);

/// Weighted degree per node (row sums); isolated nodes get 0.
std::vector<double> degrees(const SparseGraph& g);

/// (D+I)^{-1/2} (A+I) (D+I)^{-1/2}: same CSR layout with the self-loop
/// diagonal materialized, so one-hop propagation is a single SpMM.
struct NormalizedAdjacency {
    index_t n_nodes = 0;
    std::vector<index_t> row_ptr;
    std::vector<index_t> col_idx;
    std::vector<double> values;

    kernels::CsrView view() const { return {n_nodes, row_ptr.data(), col_idx.data(), values.data()}; }
    index_t nnz() const { return static_cast<index_t>(col_idx.size()); }
};

NormalizedAdjacency normalize_with_self_loops(const SparseGraph& g);

/// Dense copy of the normalized adjacency, for small-instance oracles.
DenseMatrix to_dense(const NormalizedAdjacency& adj);

} // namespace gnnbench
