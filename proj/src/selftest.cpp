#include "gnnbench/selftest.hpp"

#include "gnnbench/bench.hpp"
#include "gnnbench/dataset.hpp"
#include "gnnbench/graph.hpp"
#include "gnnbench/linalg.hpp"
#include "gnnbench/models.hpp"
#include "gnnbench/nn.hpp"
#include "gnnbench/propagation.hpp"
#include "gnnbench/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gnnbench {

namespace {

SparseGraph random_graph(index_t n, double p, bool weighted, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> wdist(0.5, 2.0);
    std::vector<Edge> edges;
    for (index_t i = 0; i < n; ++i)
        for (index_t j = i + 1; j < n; ++j)
            if (unit(rng) < p) {
                Edge e{i, j, std::nullopt};
                if (weighted) e.weight = wdist(rng);
                edges.push_back(e);
            }
    return from_edge_list(edges, n);
}

DenseMatrix random_matrix(index_t r, index_t c, Rng& rng, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    DenseMatrix m(r, c);
    for (double& v : m.data) v = normal(rng);
    return m;
}

const std::vector<ModelKind>& all_kinds() {
    static const std::vector<ModelKind> kinds{ModelKind::GCN, ModelKind::SGC, ModelKind::APPNP,
                                              ModelKind::SGC_MLP, ModelKind::APPNP_MLP};
    return kinds;
}

Prediction forward_inference(const ModelSpec& spec, const NormalizedAdjacency& adj,
                             const DenseMatrix& x, const ModelParams& params) {
    Rng dummy(0);
    switch (spec.kind) {
        case ModelKind::GCN:
            return gcn_forward(adj, x, params, spec.dropout_p, false, dummy);
        case ModelKind::SGC:
            return sgc_forward(adj, x, params, spec.k_hops);
        case ModelKind::APPNP:
            return appnp_forward(adj, x, params, spec.alpha, spec.ppr_iters, spec.ppr_tol);
        case ModelKind::SGC_MLP:
            return sgc_mlp_forward(adj, x, params, spec.k_hops, spec.dropout_p, false, dummy);
        case ModelKind::APPNP_MLP:
            return appnp_mlp_forward(adj, x, params, spec.alpha, spec.ppr_iters, spec.ppr_tol,
                                     spec.dropout_p, false, dummy);
    }
    throw std::logic_error("forward_inference: bad ModelKind");
}

// Iterative PPR against the dense linear solve on 100 random graphs.
CheckResult check_ppr_oracle() {
    CheckResult res{"ppr_matches_dense_solve", true, ""};
    Rng rng(20240301);
    const double alphas[] = {0.1, 0.2, 0.5, 0.85};
    const double tol = 1e-8;
    double worst_ratio = 0.0;
    for (int g = 0; g < 100; ++g) {
        const index_t n = 2 + static_cast<index_t>(rng() % 199);  // 2..200
        std::uniform_real_distribution<double> pdist(0.02, 0.25);
        const double p = pdist(rng);
        SparseGraph graph = random_graph(n, p, g % 3 == 0, rng);
        NormalizedAdjacency adj = normalize_with_self_loops(graph);
        const index_t d = 1 + static_cast<index_t>(rng() % 6);
        DenseMatrix x = random_matrix(n, d, rng);
        const double alpha = alphas[g % 4];

        PprResult it = propagate_ppr(adj, x, alpha, 100000, tol);
        DenseMatrix exact = ppr_exact_dense(adj, x, alpha);
        const double diff = max_abs_diff(it.z, exact);
        worst_ratio = std::max(worst_ratio, diff / tol);
        if (!it.converged || diff > 10.0 * tol) {
            res.pass = false;
            std::ostringstream ss;
            ss << "graph " << g << " (n=" << n << ", alpha=" << alpha << "): |iterative - dense| = "
               << diff << (it.converged ? "" : " (not converged)");
            res.detail = ss.str();
            return res;
        }
    }
    std::ostringstream ss;
    ss << "100 graphs, worst |iterative - dense| / tol = " << worst_ratio << " (bound 10)";
    res.detail = ss.str();
    return res;
}

// Analytic gradients of every parameter of every model against central
// differences, dropout disabled so the loss is a pure function of weights.
CheckResult check_gradients() {
    CheckResult res{"model_gradients_match_finite_diff", true, ""};
    Rng rng(42);
    Dataset ds = generate_synthetic(12, 3, 6, 0.35, 0.05, 2.0, rng);
    NormalizedAdjacency adj = normalize_with_self_loops(ds.graph);
    Rng split_rng(11);
    Split split = split_fraction(ds.labels, 0.6, 0.2, split_rng);

    double worst = 0.0;
    std::string worst_at;
    for (ModelKind kind : all_kinds()) {
        ModelSpec spec;
        spec.kind = kind;
        spec.hidden_dim = 8;
        spec.dropout_p = 0.0;
        spec.alpha = 0.2;
        spec.ppr_iters = 50;
        spec.ppr_tol = 1e-9;
        DenseMatrix phi = propagated_features(spec, adj, ds.features);

        Rng init(100 + static_cast<std::uint64_t>(kind));
        ModelParams params = init_params(spec, phi.cols, ds.n_classes, 0.0, init);
        {
            Rng r(5);
            training_loss_and_grad(spec, adj, phi, ds.labels, split.train, params, r);
        }
        std::vector<DenseMatrix> analytic;
        for (const Parameter& p : params.params) analytic.push_back(p.grad);

        for (std::size_t i = 0; i < params.params.size(); ++i) {
            auto loss_fn = [&]() {
                Rng r(5);
                return training_loss_and_grad(spec, adj, phi, ds.labels, split.train, params, r);
            };
            DenseMatrix fd = finite_diff_grad(loss_fn, params.params[i].value, 1e-5);
            const double rel = max_abs_diff(analytic[i], fd) / (max_abs(fd) + 1e-12);
            if (rel > worst) {
                worst = rel;
                worst_at = to_string(kind) + "/" + params.params[i].name;
            }
        }
    }
    res.pass = worst < 1e-4;
    std::ostringstream ss;
    ss << "worst relative error " << worst << " at " << worst_at << " (bound 1e-4)";
    res.detail = ss.str();
    return res;
}

// With identity activations and no dropout, a 2-layer GCN is SGC(K=2) with
// the product weight matrix.
CheckResult check_collapse() {
    CheckResult res{"gcn_sgc_collapse", true, ""};
    Rng rng(311);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const index_t n = 5 + static_cast<index_t>(rng() % 40);
        SparseGraph g = random_graph(n, 0.2, rep % 2 == 0, rng);
        NormalizedAdjacency adj = normalize_with_self_loops(g);
        const index_t d = 4, h = 3, c = 3;
        DenseMatrix x = random_matrix(n, d, rng);

        ModelSpec gcn;
        gcn.kind = ModelKind::GCN;
        gcn.hidden_dim = h;
        Rng init(1000 + rep);
        ModelParams gcn_params = init_params(gcn, d, c, 0.0, init);

        ModelParams sgc_params;
        sgc_params.params.emplace_back(
            "W", kernels::gemm(gcn_params.params[0].value, gcn_params.params[2].value));

        Rng dummy(0);
        Prediction a = gcn_forward(adj, x, gcn_params, 0.5, false, dummy, Activation::Identity);
        Prediction b = sgc_forward(adj, x, sgc_params, 2);
        worst = std::max(worst, max_abs_diff(a.probs, b.probs));
    }
    res.pass = worst <= 1e-8;
    std::ostringstream ss;
    ss << "worst probability difference " << worst << " over 20 instances (bound 1e-8)";
    res.detail = ss.str();
    return res;
}

// phi is parameter-free: recomputing it is bitwise stable, and a forward on
// the precomputed phi equals the forward that recomputes it inline.
CheckResult check_decoupling() {
    CheckResult res{"decoupling_bitwise", true, ""};
    Rng rng(2718);
    SparseGraph g = random_graph(60, 0.15, false, rng);
    NormalizedAdjacency adj = normalize_with_self_loops(g);
    DenseMatrix x = random_matrix(60, 7, rng);
    const index_t c = 4;

    for (ModelKind kind : {ModelKind::SGC, ModelKind::APPNP, ModelKind::SGC_MLP, ModelKind::APPNP_MLP}) {
        ModelSpec spec;
        spec.kind = kind;
        spec.hidden_dim = 5;
        spec.alpha = 0.15;
        spec.ppr_iters = 40;
        spec.ppr_tol = 1e-10;
        DenseMatrix phi = propagated_features(spec, adj, x);
        for (int rep = 0; rep < 3; ++rep) {
            DenseMatrix again = propagated_features(spec, adj, x);
            if (max_abs_diff(phi, again) != 0.0) {
                res.pass = false;
                res.detail = to_string(kind) + ": recomputed phi differs";
                return res;
            }
        }
        Rng init(9 + static_cast<std::uint64_t>(kind));
        ModelParams params = init_params(spec, phi.cols, c, 0.0, init);
        Prediction inline_fwd = forward_inference(spec, adj, x, params);
        Prediction pre_fwd = predict_prepared(spec, adj, phi, params);
        if (max_abs_diff(inline_fwd.probs, pre_fwd.probs) != 0.0) {
            res.pass = false;
            res.detail = to_string(kind) + ": precomputed-phi forward differs from inline";
            return res;
        }
    }
    res.detail = "4 decoupled models, phi recomputation and both forwards bitwise identical";
    return res;
}

CheckResult check_spectrum() {
    CheckResult res{"normalized_adjacency_spectrum", true, ""};
    Rng rng(99);
    double lo = 1.0, hi = -1.0;
    for (int g = 0; g < 30; ++g) {
        const index_t n = 2 + static_cast<index_t>(rng() % 119);
        std::uniform_real_distribution<double> pdist(0.01, 0.3);
        SparseGraph graph = random_graph(n, pdist(rng), g % 4 == 0, rng);
        NormalizedAdjacency adj = normalize_with_self_loops(graph);
        std::vector<double> eig = linalg::sym_eigenvalues(to_dense(adj));
        lo = std::min(lo, eig.front());
        hi = std::max(hi, eig.back());
        if (eig.front() < -1.0 - 1e-10 || eig.back() > 1.0 + 1e-10) {
            res.pass = false;
            std::ostringstream ss;
            ss << "graph " << g << ": spectrum [" << eig.front() << ", " << eig.back() << "]";
            res.detail = ss.str();
            return res;
        }
    }
    std::ostringstream ss;
    ss << "30 graphs, spectrum within [" << lo << ", " << hi << "]";
    res.detail = ss.str();
    return res;
}

CheckResult check_permutation() {
    CheckResult res{"permutation_equivariance", true, ""};
    Rng rng(7117);
    const index_t n = 40, d = 6, c = 3;
    SparseGraph g = random_graph(n, 0.2, true, rng);
    NormalizedAdjacency adj = normalize_with_self_loops(g);
    DenseMatrix x = random_matrix(n, d, rng);

    std::vector<index_t> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), index_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<Edge> perm_edges;
    for (index_t i = 0; i < n; ++i)
        for (index_t p = g.row_ptr[static_cast<std::size_t>(i)];
             p < g.row_ptr[static_cast<std::size_t>(i) + 1]; ++p) {
            const index_t j = g.col_idx[static_cast<std::size_t>(p)];
            if (i < j)
                perm_edges.push_back({perm[static_cast<std::size_t>(i)],
                                      perm[static_cast<std::size_t>(j)],
                                      g.values[static_cast<std::size_t>(p)]});
        }
    NormalizedAdjacency perm_adj = normalize_with_self_loops(from_edge_list(perm_edges, n));
    DenseMatrix perm_x(n, d);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < d; ++j) perm_x(perm[static_cast<std::size_t>(i)], j) = x(i, j);

    double worst = 0.0;
    for (ModelKind kind : all_kinds()) {
        ModelSpec spec;
        spec.kind = kind;
        spec.hidden_dim = 5;
        spec.alpha = 0.2;
        spec.ppr_iters = 60;
        spec.ppr_tol = 0.0;  // fixed iteration count on both graphs
        Rng init(50 + static_cast<std::uint64_t>(kind));
        ModelParams params = init_params(spec, d, c, 0.0, init);

        Prediction base = forward_inference(spec, adj, x, params);
        Prediction permuted = forward_inference(spec, perm_adj, perm_x, params);
        for (index_t i = 0; i < n; ++i)
            for (index_t j = 0; j < c; ++j)
                worst = std::max(worst, std::fabs(permuted.probs(perm[static_cast<std::size_t>(i)], j) -
                                                  base.probs(i, j)));
    }
    res.pass = worst <= 1e-10;
    std::ostringstream ss;
    ss << "worst probability deviation " << worst << " across 5 models (bound 1e-10)";
    res.detail = ss.str();
    return res;
}

CheckResult check_end_to_end() {
    CheckResult res{"synthetic_end_to_end", true, ""};
    std::ostringstream ss;
    for (const auto& [name, acc] : synthetic_end_to_end()) {
        if (acc <= 0.95) res.pass = false;
        ss << name << "=" << acc << " ";
    }
    ss << "(bound 0.95)";
    res.detail = ss.str();
    return res;
}

} // namespace

std::vector<CheckResult> run_selftest() {
    std::vector<CheckResult> results;
    results.push_back(check_ppr_oracle());
    results.push_back(check_gradients());
    results.push_back(check_collapse());
    results.push_back(check_decoupling());
    results.push_back(check_spectrum());
    results.push_back(check_permutation());
    results.push_back(check_end_to_end());
    return results;
}

std::vector<std::pair<std::string, double>> synthetic_end_to_end(std::uint64_t seed) {
    Rng gen(seed);
    Dataset ds = generate_synthetic(50, 4, 12, 0.15, 0.01, 10.0, gen);
    NormalizedAdjacency adj = normalize_with_self_loops(ds.graph);
    Rng split_rng(stream_seed(seed, "split"));
    Split split = split_fraction(ds.labels, 0.5, 0.2, split_rng);

    std::vector<std::pair<std::string, double>> out;
    for (ModelKind kind : all_kinds()) {
        ModelSpec spec;
        spec.kind = kind;
        DenseMatrix phi = propagated_features(spec, adj, ds.features);
        TrainConfig cfg;
        cfg.seed = seed;
        Rng init(stream_seed(seed, "init"));
        TrainResult tr = train_prepared(spec, adj, phi, ds.labels, ds.n_classes, split, cfg, init);
        Prediction pred = predict_prepared(spec, adj, phi, tr.params);
        out.emplace_back(to_string(kind), evaluate_accuracy(pred, ds.labels, split.test));
    }
    return out;
}

} // namespace gnnbench
