#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gnnbench/graph.hpp"
#include "gnnbench/propagation.hpp"
#include "gnnbench/rng.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

using namespace gnnbench;

namespace {

SparseGraph random_graph(index_t n, double p, Rng& rng, bool weighted = false) {
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

DenseMatrix random_matrix(index_t r, index_t c, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    DenseMatrix m(r, c);
    for (double& v : m.data) v = normal(rng);
    return m;
}

// single-edge pair graph: every normalized entry is 1/2
NormalizedAdjacency pair_adjacency() {
    return normalize_with_self_loops(from_edge_list({{0, 1, std::nullopt}}, 2));
}

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
    Eigen::MatrixXd e(m.rows, m.cols);
    for (index_t i = 0; i < m.rows; ++i)
        for (index_t j = 0; j < m.cols; ++j) e(i, j) = m(i, j);
    return e;
}

} // namespace

TEST_CASE("propagate_power k=0 returns the input bitwise") {
    Rng rng(21);
    const SparseGraph g = random_graph(15, 0.2, rng);
    const auto adj = normalize_with_self_loops(g);
    const auto x = random_matrix(15, 4, rng);
    const auto y = propagate_power(adj, x, 0);
    CHECK(y.data == x.data);
}

TEST_CASE("propagate_power hand-computed on the pair graph") {
    // adj = [[.5,.5],[.5,.5]] is idempotent: any power maps [1,0] to [.5,.5]
    const auto adj = pair_adjacency();
    const auto x = DenseMatrix::from_rows({{1}, {0}});
    for (int k : {1, 2, 5}) {
        const auto y = propagate_power(adj, x, k);
        CHECK(y(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(y(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("propagate_power composes: k=a+b equals two stages") {
    Rng rng(22);
    const auto adj = normalize_with_self_loops(random_graph(25, 0.2, rng, true));
    const auto x = random_matrix(25, 3, rng);
    const auto once = propagate_power(adj, propagate_power(adj, x, 2), 3);
    const auto direct = propagate_power(adj, x, 5);
    CHECK(max_abs_diff(once, direct) < 1e-10);
}

TEST_CASE("propagate_power is linear") {
    Rng rng(23);
    const auto adj = normalize_with_self_loops(random_graph(20, 0.25, rng));
    const auto x = random_matrix(20, 2, rng);
    const auto y = random_matrix(20, 2, rng);
    DenseMatrix combo(20, 2);
    for (index_t i = 0; i < combo.size(); ++i)
        combo.data[static_cast<std::size_t>(i)] = 2.0 * x.data[static_cast<std::size_t>(i)] -
                                                  0.5 * y.data[static_cast<std::size_t>(i)];
    const auto lhs = propagate_power(adj, combo, 3);
    const auto px = propagate_power(adj, x, 3);
    const auto py = propagate_power(adj, y, 3);
    double worst = 0.0;
    for (index_t i = 0; i < lhs.size(); ++i)
        worst = std::max(worst, std::abs(lhs.data[static_cast<std::size_t>(i)] -
                                         (2.0 * px.data[static_cast<std::size_t>(i)] -
                                          0.5 * py.data[static_cast<std::size_t>(i)])));
    CHECK(worst < 1e-10);
}

TEST_CASE("propagate_power validation") {
    const auto adj = pair_adjacency();
    CHECK_THROWS_AS((void)propagate_power(adj, DenseMatrix(2, 1), -1), std::invalid_argument);
    CHECK_THROWS_AS((void)propagate_power(adj, DenseMatrix(3, 1), 1), std::invalid_argument);
}

TEST_CASE("propagate_ppr alpha=1 returns the input exactly") {
    Rng rng(24);
    const auto adj = normalize_with_self_loops(random_graph(12, 0.3, rng));
    const auto x = random_matrix(12, 3, rng);
    const auto res = propagate_ppr(adj, x, 1.0, 50, 1e-12);
    CHECK(res.converged);
    CHECK(max_abs_diff(res.z, x) == 0.0);
}

TEST_CASE("propagate_ppr hand-computed on the pair graph") {
    // alpha=1/2, x=[1,0]: fixed point z = [3/4, 1/4]
    const auto adj = pair_adjacency();
    const auto x = DenseMatrix::from_rows({{1}, {0}});
    const auto res = propagate_ppr(adj, x, 0.5, 200, 1e-14);
    CHECK(res.converged);
    CHECK(res.z(0, 0) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(res.z(1, 0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("propagate_ppr of zero input is zero") {
    Rng rng(25);
    const auto adj = normalize_with_self_loops(random_graph(10, 0.3, rng));
    const auto res = propagate_ppr(adj, DenseMatrix(10, 4), 0.2, 30, 1e-10);
    CHECK(res.converged);
    CHECK(max_abs(res.z) == 0.0);
}

TEST_CASE("propagate_ppr converges with residual within tol") {
    Rng rng(26);
    for (int rep = 0; rep < 5; ++rep) {
        const index_t n = 5 + static_cast<index_t>(rng() % 40);
        const auto adj = normalize_with_self_loops(random_graph(n, 0.2, rng, rep % 2 == 1));
        const auto x = random_matrix(n, 3, rng);
        const auto res = propagate_ppr(adj, x, 0.15, 5000, 1e-9);
        CHECK(res.converged);
        CHECK(res.residual <= 1e-9);
        CHECK(res.iters_run <= 5000);
    }
}

TEST_CASE("propagate_ppr reports non-convergence instead of throwing") {
    Rng rng(27);
    const auto adj = normalize_with_self_loops(random_graph(30, 0.2, rng));
    const auto x = random_matrix(30, 2, rng);
    const auto res = propagate_ppr(adj, x, 0.05, 2, 1e-15);  // far too few iterations
    CHECK_FALSE(res.converged);
    CHECK(res.iters_run == 2);
    CHECK(res.residual > 1e-15);
}

TEST_CASE("propagate_ppr agrees with the exact dense solve") {
    Rng rng(28);
    for (double alpha : {0.1, 0.5, 0.85}) {
        const index_t n = 8 + static_cast<index_t>(rng() % 30);
        const auto adj = normalize_with_self_loops(random_graph(n, 0.25, rng, true));
        const auto x = random_matrix(n, 4, rng);
        const auto iterated = propagate_ppr(adj, x, alpha, 200000, 1e-12);
        const auto exact = ppr_exact_dense(adj, x, alpha);
        CHECK(iterated.converged);
        CHECK(max_abs_diff(iterated.z, exact) < 1e-9);
    }
}

TEST_CASE("ppr_exact_dense matches an Eigen solve") {
    Rng rng(29);
    const index_t n = 20;
    const auto adj = normalize_with_self_loops(random_graph(n, 0.3, rng, true));
    const auto x = random_matrix(n, 3, rng);
    const double alpha = 0.2;
    const auto z = ppr_exact_dense(adj, x, alpha);

    const Eigen::MatrixXd a =
        Eigen::MatrixXd::Identity(n, n) - (1.0 - alpha) * to_eigen(to_dense(adj));
    const Eigen::MatrixXd ref = a.partialPivLu().solve(alpha * to_eigen(x));
    double worst = 0.0;
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < 3; ++j) worst = std::max(worst, std::abs(z(i, j) - ref(i, j)));
    CHECK(worst < 1e-10);
}

TEST_CASE("ppr validation") {
    const auto adj = pair_adjacency();
    const DenseMatrix x(2, 1);
    CHECK_THROWS_AS((void)propagate_ppr(adj, x, 0.0, 10, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS((void)propagate_ppr(adj, x, 1.5, 10, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS((void)propagate_ppr(adj, x, 0.5, 0, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS((void)propagate_ppr(adj, DenseMatrix(3, 1), 0.5, 10, 1e-6),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)ppr_exact_dense(adj, x, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)ppr_exact_dense(adj, DenseMatrix(3, 1), 0.5), std::invalid_argument);
}

TEST_CASE("spmm wrapper propagates one hop") {
    const auto adj = pair_adjacency();
    const auto x = DenseMatrix::from_rows({{2, 0}, {0, 4}});
    const auto y = spmm(adj, x);
    CHECK(y(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(y(0, 1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(y(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(y(1, 1) == doctest::Approx(2.0).epsilon(1e-15));
}
