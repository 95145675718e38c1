#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gnnbench/nn.hpp"
#include "gnnbench/rng.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace gnnbench;

namespace {

DenseMatrix random_matrix(index_t r, index_t c, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    DenseMatrix m(r, c);
    for (double& v : m.data) v = normal(rng);
    return m;
}

} // namespace

TEST_CASE("glorot_init is deterministic, bounded, and centered") {
    Rng a(5), b(5);
    const auto w1 = glorot_init(100, 100, a);
    const auto w2 = glorot_init(100, 100, b);
    CHECK(w1.data == w2.data);

    const double limit = std::sqrt(6.0 / 200.0);
    double sum = 0.0;
    for (double v : w1.data) {
        CHECK(std::abs(v) <= limit);
        sum += v;
    }
    // mean of 10^4 uniform(-L,L) draws: sd = L / sqrt(3 * 10^4)
    const double sd_mean = limit / std::sqrt(3.0 * 1e4);
    CHECK(std::abs(sum / 1e4) < 3.0 * sd_mean);

    Rng c(6);
    CHECK(glorot_init(100, 100, c).data != w1.data);
    CHECK_THROWS_AS((void)glorot_init(0, 3, c), std::invalid_argument);
}

TEST_CASE("linear hand-computed") {
    const auto x = DenseMatrix::from_rows({{1, 2}});
    const auto w = DenseMatrix::from_rows({{1}, {1}});
    const auto y = linear(x, w);
    CHECK(y.rows == 1);
    CHECK(y.cols == 1);
    CHECK(y(0, 0) == 3.0);
    CHECK_THROWS_AS((void)linear(x, DenseMatrix(3, 2)), std::invalid_argument);
}

TEST_CASE("linear_backward matches finite differences and accumulates") {
    Rng rng(31);
    auto x = random_matrix(3, 4, rng);
    const auto w = random_matrix(4, 2, rng);

    // loss = 0.5 * sum (x w)^2  ->  dy = x w
    const auto loss_of = [&]() {
        const auto y = linear(x, w);
        double s = 0.0;
        for (double v : y.data) s += v * v;
        return 0.5 * s;
    };
    const auto dy = linear(x, w);

    DenseMatrix dw(4, 2), dx;
    linear_backward(x, w, dy, &dx, dw);

    DenseMatrix wcopy = w;
    const auto fd_w = finite_diff_grad(
        [&]() {
            const auto y = linear(x, wcopy);
            double s = 0.0;
            for (double v : y.data) s += v * v;
            return 0.5 * s;
        },
        wcopy);
    CHECK(max_abs_diff(dw, fd_w) < 1e-6);

    const auto fd_x = finite_diff_grad(loss_of, x);
    CHECK(max_abs_diff(dx, fd_x) < 1e-6);

    // dw accumulates: a second identical call doubles it
    DenseMatrix dw2 = dw;
    linear_backward(x, w, dy, nullptr, dw2);
    for (std::size_t i = 0; i < dw.data.size(); ++i)
        CHECK(dw2.data[i] == doctest::Approx(2.0 * dw.data[i]).epsilon(1e-12));
}

TEST_CASE("relu clamps and its subgradient at zero is zero") {
    const auto x = DenseMatrix::from_rows({{-1.5, 0.0, 2.5}});
    const auto y = relu(x);
    CHECK(y(0, 0) == 0.0);
    CHECK(y(0, 1) == 0.0);
    CHECK(y(0, 2) == 2.5);

    const auto dy = DenseMatrix::from_rows({{7.0, 7.0, 7.0}});
    const auto dx = relu_backward(x, dy);
    CHECK(dx(0, 0) == 0.0);
    CHECK(dx(0, 1) == 0.0);  // kink: subgradient 0
    CHECK(dx(0, 2) == 7.0);
    CHECK_THROWS_AS((void)relu_backward(x, DenseMatrix(2, 2)), std::invalid_argument);
}

TEST_CASE("softmax_rows hand values and overflow safety") {
    const auto p = softmax_rows(DenseMatrix::from_rows({{0.0, 0.0}, {1000.0, 1000.0}}));
    CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p(1, 1) == doctest::Approx(0.5).epsilon(1e-15));

    const auto q = softmax_rows(DenseMatrix::from_rows({{1000.0, 0.0, -1000.0}}));
    CHECK(q.all_finite());
    CHECK(q(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    double row_sum = q(0, 0) + q(0, 1) + q(0, 2);
    CHECK(row_sum == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(32);
    const auto r = softmax_rows(random_matrix(5, 7, rng));
    for (index_t i = 0; i < 5; ++i) {
        double s = 0.0;
        for (index_t j = 0; j < 7; ++j) {
            CHECK(r(i, j) >= 0.0);
            s += r(i, j);
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("masked cross-entropy hand value ln 4") {
    // row 0: logits [0, ln 3] with label 0 -> p0 = 1/4 -> loss = ln 4
    const auto logits = DenseMatrix::from_rows({{0.0, std::log(3.0)}, {5.0, -5.0}});
    const std::vector<int> labels = {0, 0};
    const double loss = masked_cross_entropy(logits, labels, {0});
    CHECK(loss == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK(loss == doctest::Approx(1.3862943611198906).epsilon(1e-12));

    // a huge correct logit drives the loss to zero without overflow
    const auto easy = DenseMatrix::from_rows({{1000.0, 0.0}});
    CHECK(masked_cross_entropy(easy, {0}, {0}) == doctest::Approx(0.0).epsilon(1e-12));

    // mean over the mask: two identical rows, same loss
    const auto two = DenseMatrix::from_rows({{0.0, std::log(3.0)}, {0.0, std::log(3.0)}});
    CHECK(masked_cross_entropy(two, {0, 0}, {0, 1}) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("masked cross-entropy argument validation") {
    const auto logits = DenseMatrix::from_rows({{0.0, 1.0}});
    CHECK_THROWS_AS((void)masked_cross_entropy(logits, {0}, {}), std::invalid_argument);
    CHECK_THROWS_AS((void)masked_cross_entropy(logits, {0, 1}, {0}), std::invalid_argument);
    CHECK_THROWS_AS((void)masked_cross_entropy(logits, {0}, {3}), std::invalid_argument);
    CHECK_THROWS_AS((void)masked_cross_entropy(logits, {5}, {0}), std::invalid_argument);
}

TEST_CASE("cross-entropy gradient matches finite differences, zero off-mask") {
    Rng rng(33);
    auto logits = random_matrix(6, 4, rng);
    std::vector<int> labels(6);
    for (auto& y : labels) y = static_cast<int>(rng() % 4);
    const std::vector<index_t> mask = {0, 2, 5};

    DenseMatrix dlogits;
    const double loss = masked_cross_entropy_with_grad(logits, labels, mask, dlogits);
    CHECK(loss == doctest::Approx(masked_cross_entropy(logits, labels, mask)).epsilon(1e-15));

    const auto fd = finite_diff_grad(
        [&]() { return masked_cross_entropy(logits, labels, mask); }, logits);
    CHECK(max_abs_diff(dlogits, fd) < 1e-6);

    for (index_t j = 0; j < 4; ++j) {
        CHECK(dlogits(1, j) == 0.0);
        CHECK(dlogits(3, j) == 0.0);
        CHECK(dlogits(4, j) == 0.0);
    }
}

TEST_CASE("dropout identity paths leave the generator untouched") {
    Rng rng(34);
    const auto x = random_matrix(4, 3, rng);

    Rng before = rng;
    const auto y_inference = dropout(x, 0.5, false, rng);
    CHECK(rng == before);  // inference never draws
    CHECK(y_inference.data == x.data);

    DenseMatrix mask;
    const auto y_p0 = dropout(x, 0.0, true, rng, &mask);
    CHECK(rng == before);  // p = 0 never draws
    CHECK(y_p0.data == x.data);
    for (double s : mask.data) CHECK(s == 1.0);

    CHECK_THROWS_AS((void)dropout(x, -0.1, true, rng), std::invalid_argument);
    CHECK_THROWS_AS((void)dropout(x, 1.0, true, rng), std::invalid_argument);
}

TEST_CASE("dropout preserves the mean and records the applied scale") {
    Rng rng(35);
    const DenseMatrix ones(200, 50, 1.0);
    const double p = 0.3;
    DenseMatrix mask;
    const auto y = dropout(ones, p, true, rng, &mask);

    double sum = 0.0;
    int zeros = 0;
    const double scale = 1.0 / (1.0 - p);
    for (std::size_t i = 0; i < y.data.size(); ++i) {
        CHECK((y.data[i] == 0.0 || y.data[i] == scale));
        CHECK(mask.data[i] == y.data[i]);  // x = 1, so y is exactly the scale
        zeros += y.data[i] == 0.0;
        sum += y.data[i];
    }
    CHECK(zeros > 0);
    // mean of 10^4 entries: sd = sqrt((1/(1-p) - 1) / 10^4) ~ 0.0065
    const double sd_mean = std::sqrt((scale - 1.0) / 1e4);
    CHECK(std::abs(sum / 1e4 - 1.0) < 3.0 * sd_mean);

    // mask (x) x reproduces the output bitwise on arbitrary input
    Rng r2(36);
    const auto x = random_matrix(30, 20, r2);
    DenseMatrix m2;
    Rng r3(37);
    const auto y2 = dropout(x, 0.45, true, r3, &m2);
    for (std::size_t i = 0; i < x.data.size(); ++i)
        CHECK(y2.data[i] == m2.data[i] * x.data[i]);
}

TEST_CASE("adam no-ops on zero gradient and zero learning rate") {
    Rng rng(38);
    std::vector<Parameter> params;
    params.emplace_back("w", random_matrix(3, 3, rng));
    const DenseMatrix initial = params[0].value;

    AdamState st = make_adam_state(params);
    TrainConfig cfg;
    cfg.learning_rate = 0.1;
    params[0].zero_grad();
    adam_step(params, st, cfg);
    CHECK(params[0].value.data == initial.data);  // zero grad, zero wd

    params[0].grad = random_matrix(3, 3, rng);
    cfg.learning_rate = 0.0;
    AdamState st2 = make_adam_state(params);
    adam_step(params, st2, cfg);
    CHECK(params[0].value.data == initial.data);  // lr = 0
}

TEST_CASE("adam first step moves by about lr in the gradient direction") {
    std::vector<Parameter> params;
    params.emplace_back("w", DenseMatrix::from_rows({{1.0, 1.0}}));
    params[0].grad = DenseMatrix::from_rows({{0.5, -0.25}});

    AdamState st = make_adam_state(params);
    TrainConfig cfg;
    cfg.learning_rate = 0.1;
    adam_step(params, st, cfg);

    // bias-corrected first step: lr * g / (|g| + eps) ~ lr * sign(g)
    CHECK(params[0].value(0, 0) == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(params[0].value(0, 1) == doctest::Approx(1.1).epsilon(1e-6));
    CHECK(st.t == 1);
}

TEST_CASE("adam weight decay acts as an L2 gradient term") {
    std::vector<Parameter> params;
    params.emplace_back("w", DenseMatrix::from_rows({{1.0}}), 0.5);
    params[0].zero_grad();

    AdamState st = make_adam_state(params);
    TrainConfig cfg;
    cfg.learning_rate = 0.1;
    adam_step(params, st, cfg);
    // effective gradient 0.5 * 1.0 -> first step ~ lr toward zero
    CHECK(params[0].value(0, 0) == doctest::Approx(0.9).epsilon(1e-6));

    AdamState bad;  // empty state for one parameter
    CHECK_THROWS_AS(adam_step(params, bad, cfg), std::invalid_argument);
}

TEST_CASE("finite_diff_grad hand value and restoration") {
    auto param = DenseMatrix::from_rows({{1.0, 2.0}});
    const auto loss = [&]() {
        return param(0, 0) * param(0, 0) + param(0, 1) * param(0, 1);
    };
    const auto g = finite_diff_grad(loss, param);
    CHECK(g(0, 0) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(g(0, 1) == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(param(0, 0) == 1.0);
    CHECK(param(0, 1) == 2.0);
}
