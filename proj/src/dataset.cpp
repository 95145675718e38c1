#include "gnnbench/dataset.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace gnnbench {

namespace {

[[noreturn]] void fail(const std::string& file, std::size_t line, const std::string& what) {
    throw std::runtime_error(file + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_or_throw(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("missing file: " + p.string());
    return in;
}

double parse_double(std::string_view tok, const std::string& file, std::size_t line) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) fail(file, line, "malformed number '" + std::string(tok) + "'");
    if (!std::isfinite(v)) fail(file, line, "non-finite value");
    return v;
}

long long parse_int(std::string_view tok, const std::string& file, std::size_t line) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        fail(file, line, "malformed integer '" + std::string(tok) + "'");
    return v;
}

std::vector<std::string_view> split_ws(std::string_view s, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find(delim, start);
        if (end == std::string_view::npos) end = s.size();
        if (end > start) out.push_back(s.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

// Known Table-1 statistics for the standard citation benchmarks; mismatches
// warn but do not fail (node counts vary by preprocessing convention).
struct KnownStats {
    index_t n_nodes;
    index_t n_features;
    int n_classes;
};
const KnownStats* known_stats(const std::string& name) {
    static const std::pair<const char*, KnownStats> table[] = {
        {"cora", {2485, 1433, 7}},
        {"citeseer", {2110, 3703, 6}},
        {"pubmed", {19717, 500, 3}},
    };
    for (const auto& [k, v] : table)
        if (name == k) return &v;
    return nullptr;
}

} // namespace

Dataset load_dataset(const std::string& dir) {
    const fs::path root(dir);

    json meta;
    {
        std::ifstream in = open_or_throw(root / "meta.json");
        try {
            meta = json::parse(in);
        } catch (const json::exception& e) {
            throw std::runtime_error("meta.json: " + std::string(e.what()));
        }
    }
    for (const char* key : {"name", "n_nodes", "n_features", "n_classes"})
        if (!meta.contains(key)) throw std::runtime_error("meta.json: missing key '" + std::string(key) + "'");

    Dataset ds;
    ds.name = meta.at("name").get<std::string>();
    const index_t n = meta.at("n_nodes").get<index_t>();
    const index_t d = meta.at("n_features").get<index_t>();
    ds.n_classes = meta.at("n_classes").get<int>();
    if (n <= 0 || d <= 0 || ds.n_classes <= 0)
        throw std::runtime_error("meta.json: n_nodes, n_features and n_classes must be positive");

    // graph.tsv: one undirected edge per line, each edge once, no self-loops
    std::vector<Edge> edges;
    {
        const std::string fname = (root / "graph.tsv").string();
        std::ifstream in = open_or_throw(root / "graph.tsv");
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            const auto toks = split_ws(line, '\t');
            if (toks.size() < 2 || toks.size() > 3) fail(fname, lineno, "expected src<TAB>dst[<TAB>weight]");
            Edge e;
            e.src = parse_int(toks[0], fname, lineno);
            e.dst = parse_int(toks[1], fname, lineno);
            if (toks.size() == 3) e.weight = parse_double(toks[2], fname, lineno);
            if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n)
                fail(fname, lineno, "node index out of range");
            if (e.src == e.dst) fail(fname, lineno, "self-loop not allowed");
            if (e.weight && !(*e.weight > 0.0)) fail(fname, lineno, "nonpositive weight");
            edges.push_back(e);
        }
        // format lists each undirected edge exactly once
        std::vector<std::pair<index_t, index_t>> keys(edges.size());
        for (std::size_t i = 0; i < edges.size(); ++i)
            keys[i] = {std::min(edges[i].src, edges[i].dst), std::max(edges[i].src, edges[i].dst)};
        std::sort(keys.begin(), keys.end());
        auto dup = std::adjacent_find(keys.begin(), keys.end());
        if (dup != keys.end())
            throw std::runtime_error(fname + ": duplicate edge (" + std::to_string(dup->first) +
                                     "," + std::to_string(dup->second) + ")");
    }
    ds.graph = from_edge_list(edges, n);

    // features.tsv: N lines, D space-separated reals
    {
        const std::string fname = (root / "features.tsv").string();
        std::ifstream in = open_or_throw(root / "features.tsv");
        ds.features = DenseMatrix(n, d);
        std::string line;
        index_t row = 0;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            if (row >= n) fail(fname, lineno, "more feature rows than n_nodes=" + std::to_string(n));
            const auto toks = split_ws(line, ' ');
            if (static_cast<index_t>(toks.size()) != d)
                fail(fname, lineno, "expected " + std::to_string(d) + " values, got " +
                                        std::to_string(toks.size()));
            double* out = ds.features.row(row);
            for (index_t j = 0; j < d; ++j) out[j] = parse_double(toks[static_cast<std::size_t>(j)], fname, lineno);
            ++row;
        }
        if (row != n)
            throw std::runtime_error(fname + ": row count mismatch, expected " + std::to_string(n) +
                                     " rows, got " + std::to_string(row));
    }

    // labels.tsv: N lines, one integer in [0,C)
    {
        const std::string fname = (root / "labels.tsv").string();
        std::ifstream in = open_or_throw(root / "labels.tsv");
        ds.labels.reserve(static_cast<std::size_t>(n));
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            if (static_cast<index_t>(ds.labels.size()) >= n)
                fail(fname, lineno, "more labels than n_nodes=" + std::to_string(n));
            const long long y = parse_int(line, fname, lineno);
            if (y < 0 || y >= ds.n_classes) fail(fname, lineno, "label out of range [0," +
                                                                    std::to_string(ds.n_classes) + ")");
            ds.labels.push_back(static_cast<int>(y));
        }
        if (static_cast<index_t>(ds.labels.size()) != n)
            throw std::runtime_error(fname + ": row count mismatch, expected " + std::to_string(n) +
                                     " labels, got " + std::to_string(ds.labels.size()));
    }

    std::vector<int> class_count(static_cast<std::size_t>(ds.n_classes), 0);
    for (int y : ds.labels) ++class_count[static_cast<std::size_t>(y)];
    for (int c = 0; c < ds.n_classes; ++c)
        if (class_count[static_cast<std::size_t>(c)] == 0)
            throw std::runtime_error(dir + ": class " + std::to_string(c) + " has no nodes");

    if (const KnownStats* ks = known_stats(ds.name)) {
        if (ks->n_nodes != n || ks->n_features != d || ks->n_classes != ds.n_classes)
            std::cerr << "warning: " << ds.name << " statistics (" << n << " nodes, " << d
                      << " features, " << ds.n_classes << " classes) differ from the reference ("
                      << ks->n_nodes << ", " << ks->n_features << ", " << ks->n_classes << ")\n";
    }
    return ds;
}

void save_dataset(const Dataset& ds, const std::string& dir) {
    const fs::path root(dir);
    fs::create_directories(root);

    {
        json meta = {{"name", ds.name},
                     {"n_nodes", ds.graph.n_nodes},
                     {"n_features", ds.features.cols},
                     {"n_classes", ds.n_classes}};
        std::ofstream out(root / "meta.json");
        out << meta.dump(2) << "\n";
    }
    {
        std::ofstream out(root / "graph.tsv");
        // upper triangle only: each undirected edge listed once
        for (index_t i = 0; i < ds.graph.n_nodes; ++i)
            for (index_t p = ds.graph.row_ptr[i]; p < ds.graph.row_ptr[i + 1]; ++p)
                if (ds.graph.col_idx[p] > i)
                    out << i << '\t' << ds.graph.col_idx[p] << '\t'
                        << format_double(ds.graph.values[p]) << '\n';
    }
    {
        std::ofstream out(root / "features.tsv");
        for (index_t i = 0; i < ds.features.rows; ++i) {
            const double* row = ds.features.row(i);
            for (index_t j = 0; j < ds.features.cols; ++j) {
                if (j) out << ' ';
                out << format_double(row[j]);
            }
            out << '\n';
        }
    }
    {
        std::ofstream out(root / "labels.tsv");
        for (int y : ds.labels) out << y << '\n';
    }
}

DenseMatrix sketch_features(const DenseMatrix& x, const SketchConfig& cfg) {
    if (cfg.target_dim < 1) throw std::invalid_argument("sketch_features: target_dim must be >= 1");
    Rng rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    DenseMatrix w(x.cols, cfg.target_dim);
    for (double& v : w.data) v = normal(rng);
    DenseMatrix out = kernels::gemm(x, w);
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.target_dim));
    for (double& v : out.data) v *= scale;
    return out;
}

Split split_per_class(const std::vector<int>& labels, int n_classes, int n_per_class, int n_val,
                      Rng& rng) {
    if (n_per_class < 1) throw std::invalid_argument("split_per_class: n_per_class must be >= 1");
    if (n_val < 0) throw std::invalid_argument("split_per_class: n_val must be >= 0");

    std::vector<std::vector<index_t>> by_class(static_cast<std::size_t>(n_classes));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= n_classes)
            throw std::invalid_argument("split_per_class: label out of range");
        by_class[static_cast<std::size_t>(labels[i])].push_back(static_cast<index_t>(i));
    }

    Split sp;
    std::vector<char> taken(labels.size(), 0);
    for (int c = 0; c < n_classes; ++c) {
        auto& members = by_class[static_cast<std::size_t>(c)];
        if (static_cast<int>(members.size()) < n_per_class)
            throw std::invalid_argument("split_per_class: class " + std::to_string(c) +
                                        " has only " + std::to_string(members.size()) + " nodes");
        std::shuffle(members.begin(), members.end(), rng);
        for (int k = 0; k < n_per_class; ++k) {
            sp.train.push_back(members[static_cast<std::size_t>(k)]);
            taken[static_cast<std::size_t>(members[static_cast<std::size_t>(k)])] = 1;
        }
    }
    std::sort(sp.train.begin(), sp.train.end());

    std::vector<index_t> rest;
    rest.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (!taken[i]) rest.push_back(static_cast<index_t>(i));
    if (static_cast<int>(rest.size()) < n_val)
        throw std::invalid_argument("split_per_class: not enough nodes left for validation");
    std::shuffle(rest.begin(), rest.end(), rng);
    sp.val.assign(rest.begin(), rest.begin() + n_val);
    sp.test.assign(rest.begin() + n_val, rest.end());
    std::sort(sp.val.begin(), sp.val.end());
    std::sort(sp.test.begin(), sp.test.end());
    return sp;
}

Split split_fraction(const std::vector<int>& labels, double frac_observed,
                     double val_frac_of_observed, Rng& rng) {
    if (!(frac_observed > 0.0) || !(frac_observed < 1.0))
        throw std::invalid_argument("split_fraction: frac_observed must be in (0,1)");
    if (val_frac_of_observed < 0.0 || val_frac_of_observed >= 1.0)
        throw std::invalid_argument("split_fraction: val_frac_of_observed must be in [0,1)");

    const index_t n = static_cast<index_t>(labels.size());
    std::vector<index_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), index_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    const index_t n_obs = static_cast<index_t>(std::floor(frac_observed * static_cast<double>(n)));
    const index_t n_val = static_cast<index_t>(std::floor(val_frac_of_observed * static_cast<double>(n_obs)));

    Split sp;
    sp.val.assign(order.begin(), order.begin() + n_val);
    sp.train.assign(order.begin() + n_val, order.begin() + n_obs);
    sp.test.assign(order.begin() + n_obs, order.end());
    if (sp.train.empty()) throw std::invalid_argument("split_fraction: empty train set");
    if (sp.test.empty()) throw std::invalid_argument("split_fraction: empty test set");
    std::sort(sp.train.begin(), sp.train.end());
    std::sort(sp.val.begin(), sp.val.end());
    std::sort(sp.test.begin(), sp.test.end());
    return sp;
}

Dataset generate_synthetic(int n_per_class, int n_classes, index_t feature_dim, double intra_p,
                           double inter_p, double feature_separation, Rng& rng) {
    if (intra_p < 0.0 || intra_p > 1.0 || inter_p < 0.0 || inter_p > 1.0)
        throw std::invalid_argument("generate_synthetic: probabilities must be in [0,1]");
    if (!(intra_p > inter_p))
        throw std::invalid_argument("generate_synthetic: intra_p must exceed inter_p");
    if (n_per_class < 1 || n_classes < 2 || feature_dim < 1)
        throw std::invalid_argument("generate_synthetic: bad sizes");

    const index_t n = static_cast<index_t>(n_per_class) * n_classes;
    Dataset ds;
    ds.name = "synthetic";
    ds.n_classes = n_classes;
    ds.labels.resize(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) ds.labels[static_cast<std::size_t>(i)] = static_cast<int>(i / n_per_class);

    std::normal_distribution<double> normal(0.0, 1.0);

    // class means: random directions scaled to feature_separation
    DenseMatrix means(n_classes, feature_dim);
    for (int c = 0; c < n_classes; ++c) {
        double* row = means.row(c);
        double norm2 = 0.0;
        for (index_t j = 0; j < feature_dim; ++j) {
            row[j] = normal(rng);
            norm2 += row[j] * row[j];
        }
        const double scale = norm2 > 0.0 ? feature_separation / std::sqrt(norm2) : 0.0;
        for (index_t j = 0; j < feature_dim; ++j) row[j] *= scale;
    }

    ds.features = DenseMatrix(n, feature_dim);
    for (index_t i = 0; i < n; ++i) {
        const double* mean = means.row(ds.labels[static_cast<std::size_t>(i)]);
        double* row = ds.features.row(i);
        for (index_t j = 0; j < feature_dim; ++j) row[j] = mean[j] + normal(rng);
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Edge> edges;
    for (index_t i = 0; i < n; ++i)
        for (index_t j = i + 1; j < n; ++j) {
            const double p = ds.labels[static_cast<std::size_t>(i)] ==
                                     ds.labels[static_cast<std::size_t>(j)]
                                 ? intra_p
                                 : inter_p;
            if (unit(rng) < p) edges.push_back({i, j, std::nullopt});
        }
    ds.graph = from_edge_list(edges, n);
    return ds;
}

} // namespace gnnbench
