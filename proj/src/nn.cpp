#include "gnnbench/nn.hpp"

#include "gnnbench/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace gnnbench {

DenseMatrix glorot_init(index_t fan_in, index_t fan_out, Rng& rng) {
    if (fan_in < 1 || fan_out < 1) throw std::invalid_argument("glorot_init: dims must be >= 1");
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    DenseMatrix w(fan_in, fan_out);
    for (double& v : w.data) v = dist(rng);
    return w;
}

DenseMatrix linear(const DenseMatrix& x, const DenseMatrix& w) {
    if (x.cols != w.rows) throw std::invalid_argument("linear: x.cols != w.rows");
    return kernels::gemm(x, w);
}

void linear_backward(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& dy,
                     DenseMatrix* dx, DenseMatrix& dw) {
    if (dy.rows != x.rows || dy.cols != w.cols)
        throw std::invalid_argument("linear_backward: dy shape mismatch");
    if (dx) *dx = kernels::gemm_nt(dy, w);  // dy * w^T
    DenseMatrix g = kernels::gemm_tn(x, dy);  // x^T * dy
    if (!g.same_shape(dw)) throw std::invalid_argument("linear_backward: dw shape mismatch");
    for (std::size_t i = 0; i < g.data.size(); ++i) dw.data[i] += g.data[i];
}

DenseMatrix relu(const DenseMatrix& x) {
    DenseMatrix y = x;
    for (double& v : y.data) v = v > 0.0 ? v : 0.0;
    return y;
}

DenseMatrix relu_backward(const DenseMatrix& pre_act, const DenseMatrix& dy) {
    if (!pre_act.same_shape(dy)) throw std::invalid_argument("relu_backward: shape mismatch");
    DenseMatrix dx = dy;
    for (std::size_t i = 0; i < dx.data.size(); ++i)
        if (!(pre_act.data[i] > 0.0)) dx.data[i] = 0.0;
    return dx;
}

DenseMatrix softmax_rows(const DenseMatrix& x) {
    DenseMatrix p(x.rows, x.cols);
    for (index_t i = 0; i < x.rows; ++i) {
        const double* xr = x.row(i);
        double* pr = p.row(i);
        double mx = xr[0];
        for (index_t j = 1; j < x.cols; ++j) mx = std::max(mx, xr[j]);
        double sum = 0.0;
        for (index_t j = 0; j < x.cols; ++j) {
            pr[j] = std::exp(xr[j] - mx);
            sum += pr[j];
        }
        const double inv = 1.0 / sum;
        for (index_t j = 0; j < x.cols; ++j) pr[j] *= inv;
    }
    return p;
}

namespace {

// loss for one masked row via logsumexp; optional gradient row
double ce_row(const double* logits, index_t c, int label, double inv_m, double* drow) {
    double mx = logits[0];
    for (index_t j = 1; j < c; ++j) mx = std::max(mx, logits[j]);
    double sum = 0.0;
    for (index_t j = 0; j < c; ++j) sum += std::exp(logits[j] - mx);
    const double lse = mx + std::log(sum);
    if (drow) {
        const double inv_sum = 1.0 / sum;
        for (index_t j = 0; j < c; ++j) drow[j] = std::exp(logits[j] - mx) * inv_sum * inv_m;
        drow[label] -= inv_m;
    }
    return lse - logits[label];
}

void check_ce_args(const DenseMatrix& logits, const std::vector<int>& labels,
                   const std::vector<index_t>& mask) {
    if (mask.empty()) throw std::invalid_argument("masked_cross_entropy: empty mask");
    if (static_cast<index_t>(labels.size()) != logits.rows)
        throw std::invalid_argument("masked_cross_entropy: labels length mismatch");
    for (index_t i : mask) {
        if (i < 0 || i >= logits.rows)
            throw std::invalid_argument("masked_cross_entropy: mask index out of range");
        if (labels[static_cast<std::size_t>(i)] < 0 ||
            labels[static_cast<std::size_t>(i)] >= logits.cols)
            throw std::invalid_argument("masked_cross_entropy: label out of range");
    }
}

} // namespace

double masked_cross_entropy(const DenseMatrix& logits, const std::vector<int>& labels,
                            const std::vector<index_t>& mask) {
    check_ce_args(logits, labels, mask);
    const double inv_m = 1.0 / static_cast<double>(mask.size());
    double loss = 0.0;
    for (index_t i : mask)
        loss += ce_row(logits.row(i), logits.cols, labels[static_cast<std::size_t>(i)], inv_m, nullptr);
    return loss * inv_m;
}

double masked_cross_entropy_with_grad(const DenseMatrix& logits, const std::vector<int>& labels,
                                      const std::vector<index_t>& mask, DenseMatrix& dlogits) {
    check_ce_args(logits, labels, mask);
    dlogits = DenseMatrix(logits.rows, logits.cols);
    const double inv_m = 1.0 / static_cast<double>(mask.size());
    double loss = 0.0;
    for (index_t i : mask)
        loss += ce_row(logits.row(i), logits.cols, labels[static_cast<std::size_t>(i)], inv_m,
                       dlogits.row(i));
    return loss * inv_m;
}

DenseMatrix dropout(const DenseMatrix& x, double p, bool training, Rng& rng, DenseMatrix* mask) {
    if (p < 0.0 || p >= 1.0) throw std::invalid_argument("dropout: p must be in [0,1)");
    if (!training || p == 0.0) {
        if (mask) {
            *mask = DenseMatrix(x.rows, x.cols, 1.0);
        }
        return x;
    }
    const double scale = 1.0 / (1.0 - p);
    std::bernoulli_distribution drop(p);
    DenseMatrix y(x.rows, x.cols);
    if (mask) *mask = DenseMatrix(x.rows, x.cols);
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        const double s = drop(rng) ? 0.0 : scale;
        y.data[i] = s * x.data[i];
        if (mask) mask->data[i] = s;
    }
    return y;
}

AdamState make_adam_state(const std::vector<Parameter>& params) {
    AdamState st;
    st.m.reserve(params.size());
    st.v.reserve(params.size());
    for (const Parameter& p : params) {
        st.m.emplace_back(p.value.rows, p.value.cols);
        st.v.emplace_back(p.value.rows, p.value.cols);
    }
    return st;
}

void adam_step(std::vector<Parameter>& params, AdamState& state, const TrainConfig& cfg) {
    if (state.m.size() != params.size())
        throw std::invalid_argument("adam_step: state does not match params");
    state.t += 1;
    const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(state.t));
    for (std::size_t k = 0; k < params.size(); ++k) {
        Parameter& p = params[k];
        DenseMatrix& m = state.m[k];
        DenseMatrix& v = state.v[k];
        for (std::size_t i = 0; i < p.value.data.size(); ++i) {
            const double g = p.grad.data[i] + p.weight_decay * p.value.data[i];
            m.data[i] = cfg.adam_beta1 * m.data[i] + (1.0 - cfg.adam_beta1) * g;
            v.data[i] = cfg.adam_beta2 * v.data[i] + (1.0 - cfg.adam_beta2) * g * g;
            const double m_hat = m.data[i] / bc1;
            const double v_hat = v.data[i] / bc2;
            p.value.data[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
        }
    }
}

DenseMatrix finite_diff_grad(const std::function<double()>& loss_fn, DenseMatrix& param,
                             double eps) {
    DenseMatrix g(param.rows, param.cols);
    for (std::size_t i = 0; i < param.data.size(); ++i) {
        const double saved = param.data[i];
        param.data[i] = saved + eps;
        const double up = loss_fn();
        param.data[i] = saved - eps;
        const double down = loss_fn();
        param.data[i] = saved;
        g.data[i] = (up - down) / (2.0 * eps);
    }
    return g;
}

} // namespace gnnbench
