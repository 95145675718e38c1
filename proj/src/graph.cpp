#include "gnnbench/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gnnbench {

SparseGraph from_edge_list(const std::vector<Edge>& edges, index_t n_nodes) {
    if (n_nodes <= 0) throw std::invalid_argument("from_edge_list: n_nodes must be positive");

    struct Triplet {
        index_t row, col;
        double w;
    };
    std::vector<Triplet> trip;
    trip.reserve(edges.size() * 2);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const Edge& ed = edges[e];
        if (ed.src < 0 || ed.src >= n_nodes || ed.dst < 0 || ed.dst >= n_nodes)
            throw std::invalid_argument("from_edge_list: edge " + std::to_string(e) +
                                        " index out of range");
        const double w = ed.weight.value_or(1.0);
        if (!(w > 0.0))
            throw std::invalid_argument("from_edge_list: edge " + std::to_string(e) +
                                        " has nonpositive weight");
        if (ed.src == ed.dst) continue;  // self-loops dropped
        trip.push_back({ed.src, ed.dst, w});
        trip.push_back({ed.dst, ed.src, w});
    }

    std::sort(trip.begin(), trip.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseGraph g;
    g.n_nodes = n_nodes;
    g.row_ptr.assign(static_cast<std::size_t>(n_nodes) + 1, 0);
    for (std::size_t i = 0; i < trip.size();) {
        std::size_t j = i;
        double w = 0.0;
        while (j < trip.size() && trip[j].row == trip[i].row && trip[j].col == trip[i].col)
            w += trip[j++].w;  // duplicates summed
        g.col_idx.push_back(trip[i].col);
        g.values.push_back(w);
        ++g.row_ptr[static_cast<std::size_t>(trip[i].row) + 1];
        i = j;
    }
    for (index_t i = 0; i < n_nodes; ++i) g.row_ptr[i + 1] += g.row_ptr[i];
    return g;
}

std::vector<double> degrees(const SparseGraph& g) {
    std::vector<double> d(static_cast<std::size_t>(g.n_nodes), 0.0);
    for (index_t i = 0; i < g.n_nodes; ++i) {
        double s = 0.0;
        for (index_t p = g.row_ptr[i]; p < g.row_ptr[i + 1]; ++p) s += g.values[p];
        d[i] = s;
    }
    return d;
}

NormalizedAdjacency normalize_with_self_loops(const SparseGraph& g) {
    const std::vector<double> deg = degrees(g);
    std::vector<double> inv_sqrt(deg.size());
    for (std::size_t i = 0; i < deg.size(); ++i) inv_sqrt[i] = 1.0 / std::sqrt(deg[i] + 1.0);

    NormalizedAdjacency adj;
    adj.n_nodes = g.n_nodes;
    adj.row_ptr.assign(static_cast<std::size_t>(g.n_nodes) + 1, 0);
    adj.col_idx.reserve(g.col_idx.size() + static_cast<std::size_t>(g.n_nodes));
    adj.values.reserve(adj.col_idx.capacity());

    for (index_t i = 0; i < g.n_nodes; ++i) {
        bool diag_done = false;
        // mirrored entries get the exact same value: w * (inv_sqrt[i]*inv_sqrt[j])
        // is symmetric in i,j because the product is computed first.
        for (index_t p = g.row_ptr[i]; p < g.row_ptr[i + 1]; ++p) {
            const index_t j = g.col_idx[p];
            if (!diag_done && j > i) {
                adj.col_idx.push_back(i);
                adj.values.push_back(inv_sqrt[i] * inv_sqrt[i]);
                diag_done = true;
            }
            adj.col_idx.push_back(j);
            adj.values.push_back(g.values[p] * (inv_sqrt[i] * inv_sqrt[j]));
        }
        if (!diag_done) {
            adj.col_idx.push_back(i);
            adj.values.push_back(inv_sqrt[i] * inv_sqrt[i]);
        }
        adj.row_ptr[i + 1] = static_cast<index_t>(adj.col_idx.size());
    }
    return adj;
}

DenseMatrix to_dense(const NormalizedAdjacency& adj) {
    DenseMatrix m(adj.n_nodes, adj.n_nodes);
    for (index_t i = 0; i < adj.n_nodes; ++i)
        for (index_t p = adj.row_ptr[i]; p < adj.row_ptr[i + 1]; ++p)
            m(i, adj.col_idx[p]) = adj.values[p];
    return m;
}

} // namespace gnnbench
