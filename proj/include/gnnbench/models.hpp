#pragma once

#include "gnnbench/dataset.hpp"
#include "gnnbench/graph.hpp"
#include "gnnbench/nn.hpp"
#include "gnnbench/propagation.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace gnnbench {

/// The five architectures: propagation phi composed with a feature extractor f.
/// GCN interleaves the two; the others apply phi once as preprocessing and
/// train a linear or MLP head on the propagated features.
enum class ModelKind { GCN, SGC, APPNP, SGC_MLP, APPNP_MLP };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

struct ModelSpec {
    ModelKind kind = ModelKind::GCN;
    int k_hops = 2;          // K for GCN/SGC family
    double alpha = 0.1;      // APPNP family
    int ppr_iters = 10;
    double ppr_tol = 1e-6;
    index_t hidden_dim = 64; // two-matrix models
    double dropout_p = 0.5;  // GCN / MLP heads

    bool two_layer() const {
        return kind == ModelKind::GCN || kind == ModelKind::SGC_MLP || kind == ModelKind::APPNP_MLP;
    }
};

/// Parameter list; {W} for the linear heads, {W1, b1, W2} for two-matrix
/// models (hidden bias, bias-free output head).
struct ModelParams {
    std::vector<Parameter> params;
};

struct Prediction {
    DenseMatrix probs;          // N x C, rows sum to 1
    std::vector<int> labels;    // argmax per row, ties toward the lowest class
};

enum class Activation { ReLU, Identity };

/// Glorot-initialized parameters for the model's shapes; weight decay lands on
/// the first layer's weights only.
ModelParams init_params(const ModelSpec& spec, index_t in_dim, index_t n_classes,
                        double weight_decay, Rng& rng);

/// phi applied once: identity for GCN (propagation happens inside the
/// forward), K-hop power for the SGC family, PPR for the APPNP family.
DenseMatrix propagated_features(const ModelSpec& spec, const NormalizedAdjacency& adj,
                                const DenseMatrix& x);

Prediction gcn_forward(const NormalizedAdjacency& adj, const DenseMatrix& x,
                       const ModelParams& params, double dropout_p, bool training, Rng& rng,
                       Activation activation = Activation::ReLU);
Prediction sgc_forward(const NormalizedAdjacency& adj, const DenseMatrix& x,
                       const ModelParams& params, int k);
Prediction appnp_forward(const NormalizedAdjacency& adj, const DenseMatrix& x,
                         const ModelParams& params, double alpha, int iters, double tol);
Prediction sgc_mlp_forward(const NormalizedAdjacency& adj, const DenseMatrix& x,
                           const ModelParams& params, int k, double dropout_p, bool training,
                           Rng& rng);
Prediction appnp_mlp_forward(const NormalizedAdjacency& adj, const DenseMatrix& x,
                             const ModelParams& params, double alpha, int iters, double tol,
                             double dropout_p, bool training, Rng& rng);

/// Thrown when a training run produces a non-finite loss; the bench runner
/// records the trial as failed.
struct TrainDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EpochStat {
    int epoch = 0;
    double train_loss = 0.0;
    double val_accuracy = 0.0;
};

struct TrainResult {
    ModelParams params;              // parameters of the best validation epoch
    std::vector<EpochStat> history;
    int best_epoch = 0;
    double best_val_accuracy = 0.0;
};

/// Full training run: minimize masked cross-entropy on split.train with Adam,
/// early-stop on validation accuracy, return the best epoch's parameters
/// (ties toward the earlier epoch). Deterministic given rng.
TrainResult train_model(const ModelSpec& spec, const Dataset& dataset, const Split& split,
                        const TrainConfig& cfg, Rng& rng);

/// Same training loop on an already-normalized adjacency and already-
/// propagated features (phi for decoupled models, raw x for GCN). This is the
/// path the bench runner uses to share preprocessing across models of a trial.
TrainResult train_prepared(const ModelSpec& spec, const NormalizedAdjacency& adj,
                           const DenseMatrix& x_or_phi, const std::vector<int>& labels,
                           index_t n_classes, const Split& split, const TrainConfig& cfg, Rng& rng);

/// Inference prediction from trained parameters on prepared inputs.
Prediction predict_prepared(const ModelSpec& spec, const NormalizedAdjacency& adj,
                            const DenseMatrix& x_or_phi, const ModelParams& params);

/// One training-mode forward/backward step: overwrites every parameter's
/// gradient and returns the masked training loss. This is the exact epoch
/// body of train_prepared, public so gradients can be checked against finite
/// differences on the real training path (use dropout_p = 0 in spec and a
/// reseeded rng to make the loss a pure function of the parameters).
double training_loss_and_grad(const ModelSpec& spec, const NormalizedAdjacency& adj,
                              const DenseMatrix& x_or_phi, const std::vector<int>& labels,
                              const std::vector<index_t>& train_idx, ModelParams& params,
                              Rng& rng);

/// Fraction of indices where the predicted label matches.
double evaluate_accuracy(const Prediction& pred, const std::vector<int>& labels,
                         const std::vector<index_t>& index_set);

} // namespace gnnbench
