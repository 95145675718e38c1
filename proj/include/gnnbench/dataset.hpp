#pragma once

#include "gnnbench/graph.hpp"
#include "gnnbench/matrix.hpp"
#include "gnnbench/rng.hpp"

#include <string>
#include <vector>

namespace gnnbench {

/// A node-classification dataset: graph, features X (N x D), labels in [0,C).
struct Dataset {
    std::string name;
    SparseGraph graph;
    DenseMatrix features;
    std::vector<int> labels;
    int n_classes = 0;

    index_t n_nodes() const { return graph.n_nodes; }
    index_t n_features() const { return features.cols; }
};

/// Disjoint train / validation / test node index sets. Train holds the
/// observed-and-labeled nodes; |train| + |val| is the observed count N_obs.
struct Split {
    std::vector<index_t> train;
    std::vector<index_t> val;
    std::vector<index_t> test;

    index_t n_observed() const { return static_cast<index_t>(train.size() + val.size()); }
};

struct SketchConfig {
    index_t target_dim = 0;
    std::uint64_t seed = 0;
};

/// Directory layout: meta.json, graph.tsv, features.tsv, labels.tsv
/// (UTF-8 text, LF line endings). Malformed input reports the line number.
Dataset load_dataset(const std::string& dir);

/// Inverse of load_dataset; load -> save -> load round-trips bit-exactly.
void save_dataset(const Dataset& ds, const std::string& dir);

/// X' = X W_r / sqrt(D') with W_r entries i.i.d. standard normal, drawn
/// row-major from a generator seeded with cfg.seed.
DenseMatrix sketch_features(const DenseMatrix& x, const SketchConfig& cfg);

/// Train = n_per_class uniform picks per class, val = n_val picks from the
/// remainder, test = everything else.
Split split_per_class(const std::vector<int>& labels, int n_classes, int n_per_class, int n_val,
                      Rng& rng);

/// Observed = floor(frac_observed * N) uniform picks; val is carved from
/// inside the observed set (val_frac_of_observed of it), train is the rest of
/// it, test is every unobserved node.
Split split_fraction(const std::vector<int>& labels, double frac_observed,
                     double val_frac_of_observed, Rng& rng);

/// Stochastic-block-model graph with Gaussian class-mean features; the test
/// fixture for everything that needs a classifiable dataset.
Dataset generate_synthetic(int n_per_class, int n_classes, index_t feature_dim, double intra_p,
                           double inter_p, double feature_separation, Rng& rng);

} // namespace gnnbench
