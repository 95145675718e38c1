#include "gnnbench/models.hpp"

#include "gnnbench/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace gnnbench {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::GCN: return "GCN";
        case ModelKind::SGC: return "SGC";
        case ModelKind::APPNP: return "APPNP";
        case ModelKind::SGC_MLP: return "SGC-MLP";
        case ModelKind::APPNP_MLP: return "APPNP-MLP";
    }
    throw std::logic_error("to_string: bad ModelKind");
}

ModelKind model_kind_from_string(const std::string& s) {
    std::string key;
    key.reserve(s.size());
    for (char c : s) key.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (key == "GCN") return ModelKind::GCN;
    if (key == "SGC") return ModelKind::SGC;
    if (key == "APPNP") return ModelKind::APPNP;
    if (key == "SGC_MLP") return ModelKind::SGC_MLP;
    if (key == "APPNP_MLP") return ModelKind::APPNP_MLP;
    throw std::invalid_argument("unknown model '" + s + "' (expected GCN, SGC, APPNP, SGC-MLP or APPNP-MLP)");
}

namespace {

std::vector<int> argmax_rows(const DenseMatrix& m) {
    std::vector<int> out(static_cast<std::size_t>(m.rows));
    for (index_t i = 0; i < m.rows; ++i) {
        const double* r = m.row(i);
        index_t best = 0;
        for (index_t j = 1; j < m.cols; ++j)
            if (r[j] > r[best]) best = j;  // ties keep the lowest class
        out[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    return out;
}

Prediction make_prediction(const DenseMatrix& logits) {
    Prediction p;
    p.probs = softmax_rows(logits);
    p.labels = argmax_rows(logits);  // softmax is monotone, same argmax
    return p;
}

void add_row_bias(DenseMatrix& m, const DenseMatrix& b) {
    if (b.rows != 1 || b.cols != m.cols) throw std::invalid_argument("add_row_bias: shape mismatch");
    const double* bias = b.row(0);
    for (index_t i = 0; i < m.rows; ++i) {
        double* r = m.row(i);
        for (index_t j = 0; j < m.cols; ++j) r[j] += bias[j];
    }
}

void mul_elementwise_inplace(DenseMatrix& m, const DenseMatrix& factor) {
    for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] *= factor.data[i];
}

// Activations of one training-mode forward pass, kept for the backward pass.
struct TwoLayerCache {
    DenseMatrix x_drop, mask_in;
    DenseMatrix pre_act;  // hidden pre-activation, post-propagation for GCN
    DenseMatrix h_drop, mask_h;
};

// Shared two-matrix forward. adj == nullptr gives the plain MLP head
//   Z = drop(relu(drop(X) W1 + b1)) W2
// and a non-null adj the GCN
//   Z = A (drop(relu(A (drop(X) W1) + b1)) W2).
DenseMatrix two_layer_logits_train(const NormalizedAdjacency* adj, const DenseMatrix& x,
                                   const ModelParams& mp, double dropout_p, Rng& rng,
                                   Activation act, TwoLayerCache& cache) {
    const DenseMatrix& w1 = mp.params[0].value;
    const DenseMatrix& b1 = mp.params[1].value;
    const DenseMatrix& w2 = mp.params[2].value;

    cache.x_drop = dropout(x, dropout_p, true, rng, &cache.mask_in);
    DenseMatrix t1 = kernels::gemm(cache.x_drop, w1);
    cache.pre_act = adj ? spmm(*adj, t1) : std::move(t1);
    add_row_bias(cache.pre_act, b1);
    DenseMatrix h = act == Activation::ReLU ? relu(cache.pre_act) : cache.pre_act;
    cache.h_drop = dropout(h, dropout_p, true, rng, &cache.mask_h);
    DenseMatrix t2 = kernels::gemm(cache.h_drop, w2);
    return adj ? spmm(*adj, t2) : std::move(t2);
}

DenseMatrix two_layer_logits_infer(const NormalizedAdjacency* adj, const DenseMatrix& x,
                                   const ModelParams& mp, Activation act) {
    const DenseMatrix& w1 = mp.params[0].value;
    const DenseMatrix& b1 = mp.params[1].value;
    const DenseMatrix& w2 = mp.params[2].value;

    DenseMatrix t1 = kernels::gemm(x, w1);
    DenseMatrix u = adj ? spmm(*adj, t1) : std::move(t1);
    add_row_bias(u, b1);
    DenseMatrix h = act == Activation::ReLU ? relu(u) : std::move(u);
    DenseMatrix t2 = kernels::gemm(h, w2);
    return adj ? spmm(*adj, t2) : std::move(t2);
}

// Accumulates parameter gradients; the propagation is symmetric, so its
// adjoint is itself.
void two_layer_backward(const NormalizedAdjacency* adj, const TwoLayerCache& cache,
                        const DenseMatrix& dlogits, Activation act, ModelParams& mp) {
    Parameter& w1 = mp.params[0];
    Parameter& b1 = mp.params[1];
    Parameter& w2 = mp.params[2];

    DenseMatrix dt2 = adj ? spmm(*adj, dlogits) : dlogits;
    DenseMatrix dh_drop;
    linear_backward(cache.h_drop, w2.value, dt2, &dh_drop, w2.grad);
    mul_elementwise_inplace(dh_drop, cache.mask_h);
    DenseMatrix du = act == Activation::ReLU ? relu_backward(cache.pre_act, dh_drop)
                                             : std::move(dh_drop);
    for (index_t i = 0; i < du.rows; ++i) {
        const double* r = du.row(i);
        double* bg = b1.grad.row(0);
        for (index_t j = 0; j < du.cols; ++j) bg[j] += r[j];
    }
    DenseMatrix dt1 = adj ? spmm(*adj, du) : std::move(du);
    linear_backward(cache.x_drop, w1.value, dt1, nullptr, w1.grad);
}

double accuracy_from_logits(const DenseMatrix& logits, const std::vector<int>& labels,
                            const std::vector<index_t>& index_set) {
    if (index_set.empty()) throw std::invalid_argument("accuracy: empty index set");
    index_t hits = 0;
    for (index_t i : index_set) {
        const double* r = logits.row(i);
        index_t best = 0;
        for (index_t j = 1; j < logits.cols; ++j)
            if (r[j] > r[best]) best = j;
        if (static_cast<int>(best) == labels[static_cast<std::size_t>(i)]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(index_set.size());
}

const NormalizedAdjacency* adj_for_forward(const ModelSpec& spec, const NormalizedAdjacency& adj) {
    return spec.kind == ModelKind::GCN ? &adj : nullptr;
}

} // namespace

ModelParams init_params(const ModelSpec& spec, index_t in_dim, index_t n_classes,
                        double weight_decay, Rng& rng) {
    if (in_dim <= 0 || n_classes <= 0) throw std::invalid_argument("init_params: bad dimensions");
    ModelParams mp;
    if (spec.two_layer()) {
        if (spec.hidden_dim <= 0) throw std::invalid_argument("init_params: bad hidden_dim");
        DenseMatrix w1 = glorot_init(in_dim, spec.hidden_dim, rng);
        DenseMatrix w2 = glorot_init(spec.hidden_dim, n_classes, rng);
        mp.params.emplace_back("W1", std::move(w1), weight_decay);
        mp.params.emplace_back("b1", DenseMatrix(1, spec.hidden_dim));
        mp.params.emplace_back("W2", std::move(w2));
    } else {
        mp.params.emplace_back("W", glorot_init(in_dim, n_classes, rng), weight_decay);
    }
    return mp;
}

DenseMatrix propagated_features(const ModelSpec& spec, const NormalizedAdjacency& adj,
                                const DenseMatrix& x) {
    switch (spec.kind) {
        case ModelKind::GCN:
            return x;  // propagation happens inside the forward pass
        case ModelKind::SGC:
        case ModelKind::SGC_MLP:
            return propagate_power(adj, x, spec.k_hops);
        case ModelKind::APPNP:
        case ModelKind::APPNP_MLP:
            return propagate_ppr(adj, x, spec.alpha, spec.ppr_iters, spec.ppr_tol).z;
    }
    throw std::logic_error("propagated_features: bad ModelKind");
}

Prediction gcn_forward(const NormalizedAdjacency& adj, const DenseMatrix& x,
                       const ModelParams& params, double dropout_p, bool training, Rng& rng,
                       Activation activation) {
    if (!training) return make_prediction(two_layer_logits_infer(&adj, x, params, activation));
    TwoLayerCache cache;
    return make_prediction(two_layer_logits_train(&adj, x, params, dropout_p, rng, activation, cache));
}

Prediction sgc_forward(const NormalizedAdjacency& adj, const DenseMatrix& x,
                       const ModelParams& params, int k) {
    DenseMatrix phi = propagate_power(adj, x, k);
    return make_prediction(kernels::gemm(phi, params.params[0].value));
}

Prediction appnp_forward(const NormalizedAdjacency& adj, const DenseMatrix& x,
                         const ModelParams& params, double alpha, int iters, double tol) {
    DenseMatrix phi = propagate_ppr(adj, x, alpha, iters, tol).z;
    return make_prediction(kernels::gemm(phi, params.params[0].value));
}

Prediction sgc_mlp_forward(const NormalizedAdjacency& adj, const DenseMatrix& x,
                           const ModelParams& params, int k, double dropout_p, bool training,
                           Rng& rng) {
    DenseMatrix phi = propagate_power(adj, x, k);
    if (!training) return make_prediction(two_layer_logits_infer(nullptr, phi, params, Activation::ReLU));
    TwoLayerCache cache;
    return make_prediction(
        two_layer_logits_train(nullptr, phi, params, dropout_p, rng, Activation::ReLU, cache));
}

Prediction appnp_mlp_forward(const NormalizedAdjacency& adj, const DenseMatrix& x,
                             const ModelParams& params, double alpha, int iters, double tol,
                             double dropout_p, bool training, Rng& rng) {
    DenseMatrix phi = propagate_ppr(adj, x, alpha, iters, tol).z;
    if (!training) return make_prediction(two_layer_logits_infer(nullptr, phi, params, Activation::ReLU));
    TwoLayerCache cache;
    return make_prediction(
        two_layer_logits_train(nullptr, phi, params, dropout_p, rng, Activation::ReLU, cache));
}

TrainResult train_model(const ModelSpec& spec, const Dataset& dataset, const Split& split,
                        const TrainConfig& cfg, Rng& rng) {
    NormalizedAdjacency adj = normalize_with_self_loops(dataset.graph);
    DenseMatrix phi = propagated_features(spec, adj, dataset.features);
    return train_prepared(spec, adj, phi, dataset.labels, dataset.n_classes, split, cfg, rng);
}

TrainResult train_prepared(const ModelSpec& spec, const NormalizedAdjacency& adj,
                           const DenseMatrix& x_or_phi, const std::vector<int>& labels,
                           index_t n_classes, const Split& split, const TrainConfig& cfg,
                           Rng& rng) {
    if (split.train.empty()) throw std::invalid_argument("train_prepared: empty training set");
    if (static_cast<index_t>(labels.size()) != x_or_phi.rows)
        throw std::invalid_argument("train_prepared: labels/features row mismatch");
    if (adj.n_nodes != x_or_phi.rows)
        throw std::invalid_argument("train_prepared: adjacency/features row mismatch");

    ModelParams mp = init_params(spec, x_or_phi.cols, n_classes, cfg.weight_decay, rng);
    AdamState adam = make_adam_state(mp.params);
    const NormalizedAdjacency* fwd_adj = adj_for_forward(spec, adj);
    const bool use_val = !split.val.empty();

    TrainResult res;
    ModelParams best;
    double best_val = -1.0;
    int best_epoch = 0;
    int since_best = 0;

    int epoch = 1;
    for (; epoch <= cfg.max_epochs; ++epoch) {
        double loss = training_loss_and_grad(spec, adj, x_or_phi, labels, split.train, mp, rng);
        if (!std::isfinite(loss))
            throw TrainDivergence(to_string(spec.kind) + ": non-finite loss at epoch " +
                                  std::to_string(epoch));
        adam_step(mp.params, adam, cfg);

        double val_acc = 0.0;
        if (use_val) {
            DenseMatrix eval_logits =
                spec.two_layer() ? two_layer_logits_infer(fwd_adj, x_or_phi, mp, Activation::ReLU)
                                 : kernels::gemm(x_or_phi, mp.params[0].value);
            val_acc = accuracy_from_logits(eval_logits, labels, split.val);
        }
        res.history.push_back({epoch, loss, val_acc});

        if (use_val) {
            if (val_acc > best_val) {  // strict: ties keep the earlier epoch
                best_val = val_acc;
                best = mp;
                best_epoch = epoch;
                since_best = 0;
            } else if (++since_best >= cfg.patience) {
                break;
            }
        }
    }

    if (use_val) {
        res.params = std::move(best);
        res.best_epoch = best_epoch;
        res.best_val_accuracy = best_val;
    } else {
        res.params = std::move(mp);
        res.best_epoch = static_cast<int>(res.history.size());
        res.best_val_accuracy = 0.0;
    }
    return res;
}

double training_loss_and_grad(const ModelSpec& spec, const NormalizedAdjacency& adj,
                              const DenseMatrix& x_or_phi, const std::vector<int>& labels,
                              const std::vector<index_t>& train_idx, ModelParams& params,
                              Rng& rng) {
    for (auto& p : params.params) p.zero_grad();
    DenseMatrix dlogits;
    if (spec.two_layer()) {
        const NormalizedAdjacency* fwd_adj = adj_for_forward(spec, adj);
        TwoLayerCache cache;
        DenseMatrix logits = two_layer_logits_train(fwd_adj, x_or_phi, params, spec.dropout_p,
                                                    rng, Activation::ReLU, cache);
        double loss = masked_cross_entropy_with_grad(logits, labels, train_idx, dlogits);
        two_layer_backward(fwd_adj, cache, dlogits, Activation::ReLU, params);
        return loss;
    }
    DenseMatrix logits = kernels::gemm(x_or_phi, params.params[0].value);
    double loss = masked_cross_entropy_with_grad(logits, labels, train_idx, dlogits);
    linear_backward(x_or_phi, params.params[0].value, dlogits, nullptr, params.params[0].grad);
    return loss;
}

Prediction predict_prepared(const ModelSpec& spec, const NormalizedAdjacency& adj,
                            const DenseMatrix& x_or_phi, const ModelParams& params) {
    if (spec.two_layer())
        return make_prediction(
            two_layer_logits_infer(adj_for_forward(spec, adj), x_or_phi, params, Activation::ReLU));
    return make_prediction(kernels::gemm(x_or_phi, params.params[0].value));
}

double evaluate_accuracy(const Prediction& pred, const std::vector<int>& labels,
                         const std::vector<index_t>& index_set) {
    if (index_set.empty()) throw std::invalid_argument("evaluate_accuracy: empty index set");
    if (pred.labels.size() != labels.size())
        throw std::invalid_argument("evaluate_accuracy: prediction/label size mismatch");
    index_t hits = 0;
    for (index_t i : index_set) {
        if (i < 0 || i >= static_cast<index_t>(labels.size()))
            throw std::out_of_range("evaluate_accuracy: index out of range");
        if (pred.labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(i)]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(index_set.size());
}

} // namespace gnnbench
