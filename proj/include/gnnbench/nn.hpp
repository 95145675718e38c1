#pragma once

#include "gnnbench/matrix.hpp"
#include "gnnbench/rng.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gnnbench {

/// A learned matrix with its gradient accumulator.
struct Parameter {
    std::string name;
    DenseMatrix value;
    DenseMatrix grad;
    double weight_decay = 0.0;

    Parameter() = default;
    Parameter(std::string n, DenseMatrix v, double wd = 0.0)
        : name(std::move(n)), value(std::move(v)), grad(value.rows, value.cols), weight_decay(wd) {}

    void zero_grad() { grad.fill(0.0); }
};

struct MlpSpec {
    index_t in_dim = 0;
    index_t hidden_dim = 64;
    index_t out_dim = 0;
    double dropout_p = 0.5;
};

struct TrainConfig {
    double learning_rate = 0.01;
    double weight_decay = 5e-4;  // applied to the first layer's weights
    int max_epochs = 500;
    int patience = 50;           // early stopping on validation accuracy
    std::uint64_t seed = 0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
};

/// Entries uniform on +-sqrt(6 / (fan_in + fan_out)); deterministic given rng.
DenseMatrix glorot_init(index_t fan_in, index_t fan_out, Rng& rng);

/// y = x * w
DenseMatrix linear(const DenseMatrix& x, const DenseMatrix& w);

/// Backward of linear: writes dl/dx (if dx != nullptr) and accumulates
/// dl/dw into dw.
void linear_backward(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& dy,
                     DenseMatrix* dx, DenseMatrix& dw);

DenseMatrix relu(const DenseMatrix& x);

/// dl/dx given pre-activation input and upstream gradient; subgradient at 0 is 0.
DenseMatrix relu_backward(const DenseMatrix& pre_act, const DenseMatrix& dy);

/// Row-wise softmax with max-subtraction; rows sum to 1.
DenseMatrix softmax_rows(const DenseMatrix& x);

/// Mean over mask of -log softmax(logits)[i, labels[i]].
double masked_cross_entropy(const DenseMatrix& logits, const std::vector<int>& labels,
                            const std::vector<index_t>& mask);

/// Same loss, also writing dl/dlogits (zero outside the mask).
double masked_cross_entropy_with_grad(const DenseMatrix& logits, const std::vector<int>& labels,
                                      const std::vector<index_t>& mask, DenseMatrix& dlogits);

/// Inverted dropout. training: zero entries with probability p and scale
/// survivors by 1/(1-p), recording the applied scale in mask when given.
/// inference: identity, rng untouched.
DenseMatrix dropout(const DenseMatrix& x, double p, bool training, Rng& rng,
                    DenseMatrix* mask = nullptr);

struct AdamState {
    std::vector<DenseMatrix> m;
    std::vector<DenseMatrix> v;
    long t = 0;
};

AdamState make_adam_state(const std::vector<Parameter>& params);

/// One Adam update with bias correction. Per-parameter weight decay is added
/// to the gradient before the moment update (L2 style).
void adam_step(std::vector<Parameter>& params, AdamState& state, const TrainConfig& cfg);

/// Central-difference gradient of loss_fn with respect to param, entrywise.
/// loss_fn must be pure and deterministic; param is restored on return.
DenseMatrix finite_diff_grad(const std::function<double()>& loss_fn, DenseMatrix& param,
                             double eps = 1e-5);

} // namespace gnnbench
