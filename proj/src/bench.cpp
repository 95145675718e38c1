#include "gnnbench/bench.hpp"

#include "gnnbench/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace gnnbench {

using json = nlohmann::json;

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void config_error(const std::string& msg) {
    throw std::invalid_argument("config: " + msg);
}

void check_keys(const json& j, const char* ctx, std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) { known = true; break; }
        if (!known) config_error("unknown key '" + item.key() + "' in " + ctx);
    }
}

double get_real(const json& j, const char* ctx) {
    if (!j.is_number()) config_error(std::string(ctx) + " must be a number");
    return j.get<double>();
}

long long get_int(const json& j, const char* ctx) {
    if (!j.is_number_integer()) config_error(std::string(ctx) + " must be an integer");
    return j.get<long long>();
}

std::string get_str(const json& j, const char* ctx) {
    if (!j.is_string()) config_error(std::string(ctx) + " must be a string");
    return j.get<std::string>();
}

ModelSpec parse_model(const json& j) {
    ModelSpec spec;
    if (j.is_string()) {
        spec.kind = model_kind_from_string(j.get<std::string>());
        return spec;
    }
    if (!j.is_object()) config_error("each model must be a name or an object");
    check_keys(j, "model", {"kind", "k_hops", "alpha", "ppr_iters", "ppr_tol", "hidden_dim", "dropout_p"});
    if (!j.contains("kind")) config_error("model object needs a 'kind'");
    spec.kind = model_kind_from_string(get_str(j.at("kind"), "model.kind"));
    if (j.contains("k_hops")) spec.k_hops = static_cast<int>(get_int(j.at("k_hops"), "model.k_hops"));
    if (j.contains("alpha")) spec.alpha = get_real(j.at("alpha"), "model.alpha");
    if (j.contains("ppr_iters")) spec.ppr_iters = static_cast<int>(get_int(j.at("ppr_iters"), "model.ppr_iters"));
    if (j.contains("ppr_tol")) spec.ppr_tol = get_real(j.at("ppr_tol"), "model.ppr_tol");
    if (j.contains("hidden_dim")) spec.hidden_dim = get_int(j.at("hidden_dim"), "model.hidden_dim");
    if (j.contains("dropout_p")) spec.dropout_p = get_real(j.at("dropout_p"), "model.dropout_p");
    if (spec.k_hops < 0) config_error("model.k_hops must be >= 0");
    if (spec.dropout_p < 0.0 || spec.dropout_p >= 1.0) config_error("model.dropout_p must be in [0,1)");
    return spec;
}

Regime parse_regime(const json& j) {
    if (!j.is_object()) config_error("regime must be an object");
    if (!j.contains("type")) config_error("regime needs a 'type'");
    std::string type = get_str(j.at("type"), "regime.type");
    if (type == "per_class") {
        check_keys(j, "regime", {"type", "n_per_class", "n_val"});
        PerClassRegime r;
        if (j.contains("n_per_class")) r.n_per_class = static_cast<int>(get_int(j.at("n_per_class"), "regime.n_per_class"));
        if (j.contains("n_val")) r.n_val = static_cast<int>(get_int(j.at("n_val"), "regime.n_val"));
        if (r.n_per_class < 1) config_error("regime.n_per_class must be >= 1");
        if (r.n_val < 0) config_error("regime.n_val must be >= 0");
        return r;
    }
    if (type == "fraction") {
        check_keys(j, "regime", {"type", "frac_observed", "val_frac_of_observed"});
        FractionRegime r;
        if (j.contains("frac_observed")) r.frac_observed = get_real(j.at("frac_observed"), "regime.frac_observed");
        if (j.contains("val_frac_of_observed"))
            r.val_frac_of_observed = get_real(j.at("val_frac_of_observed"), "regime.val_frac_of_observed");
        if (r.frac_observed <= 0.0 || r.frac_observed >= 1.0) config_error("regime.frac_observed must be in (0,1)");
        if (r.val_frac_of_observed < 0.0 || r.val_frac_of_observed >= 1.0)
            config_error("regime.val_frac_of_observed must be in [0,1)");
        return r;
    }
    config_error("regime.type must be 'per_class' or 'fraction'");
}

TrainConfig parse_train(const json& j, TrainConfig base) {
    if (!j.is_object()) config_error("train must be an object");
    check_keys(j, "train", {"learning_rate", "weight_decay", "max_epochs", "patience",
                            "adam_beta1", "adam_beta2", "adam_eps"});
    if (j.contains("learning_rate")) base.learning_rate = get_real(j.at("learning_rate"), "train.learning_rate");
    if (j.contains("weight_decay")) base.weight_decay = get_real(j.at("weight_decay"), "train.weight_decay");
    if (j.contains("max_epochs")) base.max_epochs = static_cast<int>(get_int(j.at("max_epochs"), "train.max_epochs"));
    if (j.contains("patience")) base.patience = static_cast<int>(get_int(j.at("patience"), "train.patience"));
    if (j.contains("adam_beta1")) base.adam_beta1 = get_real(j.at("adam_beta1"), "train.adam_beta1");
    if (j.contains("adam_beta2")) base.adam_beta2 = get_real(j.at("adam_beta2"), "train.adam_beta2");
    if (j.contains("adam_eps")) base.adam_eps = get_real(j.at("adam_eps"), "train.adam_eps");
    if (base.learning_rate <= 0.0) config_error("train.learning_rate must be > 0");
    if (base.weight_decay < 0.0) config_error("train.weight_decay must be >= 0");
    if (base.max_epochs < 1) config_error("train.max_epochs must be >= 1");
    if (base.patience < 1 || base.patience > base.max_epochs)
        config_error("train.patience must be in [1, max_epochs]");
    return base;
}

// Shortest decimal form that round-trips (0.5 -> "0.5").
std::string fmt_short(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string fmt_fixed(double v, int places) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", places, v);
    return buf;
}

std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

Split make_split(const Dataset& ds, const Regime& regime, Rng& rng) {
    return std::visit(
        overloaded{[&](const PerClassRegime& r) {
                       return split_per_class(ds.labels, ds.n_classes, r.n_per_class, r.n_val, rng);
                   },
                   [&](const FractionRegime& r) {
                       return split_fraction(ds.labels, r.frac_observed, r.val_frac_of_observed, rng);
                   }},
        regime);
}

// Propagation signature; models sharing one reuse the same phi within a trial.
using PropKey = std::tuple<int, int, double, int, double>;

PropKey prop_key(const ModelSpec& spec) {
    switch (spec.kind) {
        case ModelKind::GCN: return {0, 0, 0.0, 0, 0.0};
        case ModelKind::SGC:
        case ModelKind::SGC_MLP: return {1, spec.k_hops, 0.0, 0, 0.0};
        case ModelKind::APPNP:
        case ModelKind::APPNP_MLP: return {2, 0, spec.alpha, spec.ppr_iters, spec.ppr_tol};
    }
    throw std::logic_error("prop_key: bad ModelKind");
}

struct ModelOutcome {
    double accuracy = 0.0;
    std::string error;
};

// One seed: sketch and split once, then train every model on shared
// propagated features. Equivalent to run_trial per model because the three
// streams depend only on the seed.
std::vector<ModelOutcome> run_trial_all(const Dataset& ds, const NormalizedAdjacency& adj,
                                        const std::vector<ModelSpec>& models, const Regime& regime,
                                        std::optional<index_t> sketch_dim, std::uint64_t seed,
                                        const TrainConfig& train_cfg, index_t& n_observed_out) {
    const DenseMatrix* x = &ds.features;
    DenseMatrix sketched;
    if (sketch_dim) {
        sketched = sketch_features(ds.features, SketchConfig{*sketch_dim, stream_seed(seed, "sketch")});
        x = &sketched;
    }
    Rng split_rng(stream_seed(seed, "split"));
    Split split = make_split(ds, regime, split_rng);
    n_observed_out = split.n_observed();

    std::map<PropKey, DenseMatrix> phi_cache;
    std::vector<ModelOutcome> out(models.size());
    for (std::size_t m = 0; m < models.size(); ++m) {
        const ModelSpec& spec = models[m];
        try {
            const DenseMatrix* phi = x;
            if (spec.kind != ModelKind::GCN) {
                auto key = prop_key(spec);
                auto it = phi_cache.find(key);
                if (it == phi_cache.end())
                    it = phi_cache.emplace(key, propagated_features(spec, adj, *x)).first;
                phi = &it->second;
            }
            TrainConfig cfg = train_cfg;
            cfg.seed = seed;
            Rng init_rng(stream_seed(seed, "init"));
            TrainResult tr = train_prepared(spec, adj, *phi, ds.labels, ds.n_classes, split, cfg, init_rng);
            Prediction pred = predict_prepared(spec, adj, *phi, tr.params);
            out[m].accuracy = evaluate_accuracy(pred, ds.labels, split.test);
        } catch (const std::exception& e) {
            out[m].error = e.what();
        }
    }
    return out;
}

// Opt-in per-trial progress on stderr (GNNBENCH_PROGRESS=1); CSV outputs and
// stdout stay byte-identical either way.
bool progress_enabled() {
    static const bool on = std::getenv("GNNBENCH_PROGRESS") != nullptr;
    return on;
}

bool key_less(const CellKey& a, const CellKey& b) {
    auto rank = [](const CellKey& k) {
        return std::make_tuple(k.dataset, k.model, k.sketch_dim.has_value(),
                               k.sketch_dim.value_or(0), k.frac_observed.value_or(-1.0),
                               k.n_per_class.value_or(-1));
    };
    return rank(a) < rank(b);
}

// Cells for one dataset at one regime point over a list of sketch dims.
std::vector<CellResult> run_cells(const Dataset& ds, const NormalizedAdjacency& adj,
                                  const ExperimentConfig& cfg, const Regime& regime,
                                  const std::vector<std::optional<index_t>>& dims) {
    if (cfg.models.empty()) config_error("models list is empty");
    if (cfg.n_trials < 1) config_error("n_trials must be >= 1");
    const std::size_t n_models = cfg.models.size();

    std::vector<CellResult> cells;
    for (const auto& dim : dims) {
        if (dim && *dim < 1) config_error("sketch dim must be >= 1");
        const double eff_dim = static_cast<double>(dim ? *dim : ds.features.cols);

        std::vector<std::vector<TrialRecord>> recs(n_models,
                                                   std::vector<TrialRecord>(cfg.n_trials));
#pragma omp parallel for schedule(dynamic)
        for (int t = 0; t < cfg.n_trials; ++t) {
            const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(t);
            index_t n_obs = 0;
            std::vector<ModelOutcome> outcomes;
            std::string prep_error;
            try {
                outcomes = run_trial_all(ds, adj, cfg.models, regime, dim, seed, cfg.train, n_obs);
            } catch (const std::exception& e) {
                prep_error = e.what();
            }
            for (std::size_t m = 0; m < n_models; ++m) {
                TrialRecord r;
                r.trial = t;
                r.seed = seed;
                r.n_observed = n_obs;
                r.ratio = n_obs > 0 ? static_cast<double>(n_obs) / eff_dim : 0.0;
                if (!prep_error.empty()) {
                    r.error = prep_error;
                } else {
                    r.accuracy = outcomes[m].accuracy;
                    r.error = outcomes[m].error;
                }
                recs[m][static_cast<std::size_t>(t)] = std::move(r);
            }
            if (progress_enabled()) {
                const std::string where =
                    ds.name + (dim ? " D'=" + std::to_string(*dim) : std::string(" raw"));
#pragma omp critical
                std::fprintf(stderr, "  %s: trial %d/%d done\n", where.c_str(), t + 1,
                             cfg.n_trials);
            }
        }

        for (std::size_t m = 0; m < n_models; ++m) {
            CellResult cell;
            cell.key.dataset = ds.name;
            cell.key.model = to_string(cfg.models[m].kind);
            cell.key.sketch_dim = dim;
            std::visit(overloaded{[&](const PerClassRegime& r) { cell.key.n_per_class = r.n_per_class; },
                                  [&](const FractionRegime& r) { cell.key.frac_observed = r.frac_observed; }},
                       regime);
            cell.trials = std::move(recs[m]);
            for (const TrialRecord& r : cell.trials)
                if (r.ok()) cell.stat.samples.push_back(r.accuracy);
            if (cell.stat.samples.empty())
                throw std::runtime_error("every trial failed for " + cell.key.dataset + "/" +
                                         cell.key.model + ": " + cell.trials.front().error);
            MeanCi mc = ci95(cell.stat.samples);
            cell.stat.mean = mc.mean;
            cell.stat.ci95 = mc.half_width;
            cell.stat.n = static_cast<int>(cell.stat.samples.size());
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

std::vector<std::optional<index_t>> dim_list(const ExperimentConfig& cfg) {
    std::vector<std::optional<index_t>> dims;
    if (cfg.sketch_dims) {
        if (cfg.sketch_dims->empty()) config_error("sketch_dims must be nonempty");
        for (index_t d : *cfg.sketch_dims) dims.emplace_back(d);
    } else {
        dims.emplace_back(std::nullopt);
    }
    return dims;
}

std::string curve_file_name(const CurveResult& c) {
    std::string ds = c.dataset;
    for (char& ch : ds)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_')) ch = '_';
    return "curve_" + ds + "_" + c.sweep + ".csv";
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + p.string());
    return f;
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        config_error(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) config_error("top level must be an object");
    check_keys(j, "config",
               {"datasets", "models", "regime", "sketch_dims", "fracs", "n_trials", "base_seed", "train"});

    ExperimentConfig cfg;
    if (!j.contains("datasets")) config_error("'datasets' is required");
    if (!j.at("datasets").is_array() || j.at("datasets").empty())
        config_error("'datasets' must be a nonempty array of paths");
    for (const auto& d : j.at("datasets")) cfg.datasets.push_back(get_str(d, "datasets entry"));

    if (!j.contains("models")) config_error("'models' is required");
    if (!j.at("models").is_array() || j.at("models").empty())
        config_error("'models' must be a nonempty array");
    for (const auto& m : j.at("models")) cfg.models.push_back(parse_model(m));

    if (j.contains("regime")) cfg.regime = parse_regime(j.at("regime"));

    if (j.contains("sketch_dims")) {
        const json& sd = j.at("sketch_dims");
        if (sd.is_string()) {
            if (sd.get<std::string>() != "raw") config_error("sketch_dims must be 'raw' or an array");
        } else if (sd.is_array()) {
            if (sd.empty()) config_error("sketch_dims array must be nonempty");
            std::vector<index_t> dims;
            for (const auto& d : sd) {
                long long v = get_int(d, "sketch_dims entry");
                if (v < 1) config_error("sketch dims must be >= 1");
                dims.push_back(static_cast<index_t>(v));
            }
            cfg.sketch_dims = std::move(dims);
        } else {
            config_error("sketch_dims must be 'raw' or an array");
        }
    }

    if (j.contains("fracs")) {
        if (!j.at("fracs").is_array()) config_error("fracs must be an array");
        for (const auto& f : j.at("fracs")) {
            double v = get_real(f, "fracs entry");
            if (v <= 0.0 || v >= 1.0) config_error("fracs entries must be in (0,1)");
            cfg.fracs.push_back(v);
        }
    }

    if (j.contains("n_trials")) {
        long long v = get_int(j.at("n_trials"), "n_trials");
        if (v < 1) config_error("n_trials must be >= 1");
        cfg.n_trials = static_cast<int>(v);
    }
    if (j.contains("base_seed")) {
        const json& s = j.at("base_seed");
        if (!s.is_number_integer()) config_error("base_seed must be an integer");
        if (!s.is_number_unsigned() && s.get<long long>() < 0) config_error("base_seed must be >= 0");
        cfg.base_seed = s.get<std::uint64_t>();
    }
    if (j.contains("train")) cfg.train = parse_train(j.at("train"), cfg.train);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

MeanCi ci95(const std::vector<double>& samples) {
    if (samples.empty()) throw std::invalid_argument("ci95: no samples");
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    MeanCi out{mean, std::nullopt};
    if (samples.size() >= 2) {
        double ss = 0.0;
        for (double v : samples) ss += (v - mean) * (v - mean);
        out.half_width = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return out;
}

double run_trial(const Dataset& dataset, const ModelSpec& model, const Regime& regime,
                 std::optional<index_t> sketch_dim, std::uint64_t seed,
                 const TrainConfig& train_cfg) {
    NormalizedAdjacency adj = normalize_with_self_loops(dataset.graph);
    index_t n_obs = 0;
    std::vector<ModelOutcome> out =
        run_trial_all(dataset, adj, {model}, regime, sketch_dim, seed, train_cfg, n_obs);
    if (!out.front().error.empty()) throw std::runtime_error(out.front().error);
    return out.front().accuracy;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.datasets.empty()) config_error("datasets list is empty");
    ExperimentResult result;
    for (const std::string& path : cfg.datasets) {
        Dataset ds = load_dataset(path);
        NormalizedAdjacency adj = normalize_with_self_loops(ds.graph);
        std::vector<CellResult> cells = run_cells(ds, adj, cfg, cfg.regime, dim_list(cfg));
        for (auto& c : cells) result.cells.push_back(std::move(c));
    }
    std::sort(result.cells.begin(), result.cells.end(),
              [](const CellResult& a, const CellResult& b) { return key_less(a.key, b.key); });
    return result;
}

std::vector<index_t> default_feature_grid(index_t raw_dim) {
    std::vector<index_t> grid;
    for (index_t d : {50, 100, 200, 300, 500, 1000, 2000, 3000})
        if (d <= raw_dim) grid.push_back(d);
    if (grid.empty()) grid.push_back(raw_dim);
    return grid;
}

std::vector<double> default_fraction_grid() { return {0.025, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7}; }

std::vector<CurveResult> sweep_features(const ExperimentConfig& cfg) {
    if (!std::holds_alternative<FractionRegime>(cfg.regime))
        config_error("sweep-features requires the fraction regime");
    std::vector<CurveResult> curves;
    for (const std::string& path : cfg.datasets) {
        Dataset ds = load_dataset(path);
        NormalizedAdjacency adj = normalize_with_self_loops(ds.graph);
        std::vector<index_t> grid =
            cfg.sketch_dims ? *cfg.sketch_dims : default_feature_grid(ds.features.cols);
        std::vector<std::optional<index_t>> dims;
        for (index_t d : grid) dims.emplace_back(d);

        CurveResult curve;
        curve.dataset = ds.name;
        curve.sweep = "features";
        curve.full.cells = run_cells(ds, adj, cfg, cfg.regime, dims);
        std::sort(curve.full.cells.begin(), curve.full.cells.end(),
                  [](const CellResult& a, const CellResult& b) { return key_less(a.key, b.key); });
        for (const CellResult& c : curve.full.cells)
            curve.points.push_back({static_cast<double>(*c.key.sketch_dim), c.key.model, c.stat});
        std::sort(curve.points.begin(), curve.points.end(), [](const CurvePoint& a, const CurvePoint& b) {
            return std::tie(a.sweep_value, a.model) < std::tie(b.sweep_value, b.model);
        });
        curves.push_back(std::move(curve));
    }
    return curves;
}

std::vector<CurveResult> sweep_fraction(const ExperimentConfig& cfg) {
    if (!std::holds_alternative<FractionRegime>(cfg.regime))
        config_error("sweep-fraction requires the fraction regime");
    const double val_frac = std::get<FractionRegime>(cfg.regime).val_frac_of_observed;
    std::vector<double> grid = cfg.fracs.empty() ? default_fraction_grid() : cfg.fracs;
    std::optional<index_t> dim;
    if (cfg.sketch_dims) {
        if (cfg.sketch_dims->size() != 1)
            config_error("sweep-fraction needs a single sketch dim (or raw features)");
        dim = cfg.sketch_dims->front();
    }

    std::vector<CurveResult> curves;
    for (const std::string& path : cfg.datasets) {
        Dataset ds = load_dataset(path);
        NormalizedAdjacency adj = normalize_with_self_loops(ds.graph);
        CurveResult curve;
        curve.dataset = ds.name;
        curve.sweep = "fraction";
        for (double frac : grid) {
            Regime regime = FractionRegime{frac, val_frac};
            std::vector<CellResult> cells = run_cells(ds, adj, cfg, regime, {dim});
            for (const CellResult& c : cells)
                curve.points.push_back({frac, c.key.model, c.stat});
            for (auto& c : cells) curve.full.cells.push_back(std::move(c));
        }
        std::sort(curve.full.cells.begin(), curve.full.cells.end(),
                  [](const CellResult& a, const CellResult& b) { return key_less(a.key, b.key); });
        std::sort(curve.points.begin(), curve.points.end(), [](const CurvePoint& a, const CurvePoint& b) {
            return std::tie(a.sweep_value, a.model) < std::tie(b.sweep_value, b.model);
        });
        curves.push_back(std::move(curve));
    }
    return curves;
}

void write_results(const ExperimentResult& result, const std::string& out_dir) {
    if (result.cells.empty()) throw std::invalid_argument("write_results: empty table");
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    std::ofstream summary = open_out(dir / "summary.csv");
    summary << "dataset,model,sketch_dim,frac_observed,n_per_class,n_trials,mean_acc,ci95\n";
    for (const CellResult& c : result.cells) {
        summary << c.key.dataset << ',' << c.key.model << ','
                << (c.key.sketch_dim ? std::to_string(*c.key.sketch_dim) : std::string("raw")) << ','
                << (c.key.frac_observed ? fmt_short(*c.key.frac_observed) : std::string()) << ','
                << (c.key.n_per_class ? std::to_string(*c.key.n_per_class) : std::string()) << ','
                << c.stat.n << ',' << fmt_fixed(c.stat.mean, 4) << ','
                << (c.stat.ci95 ? fmt_fixed(*c.stat.ci95, 4) : std::string()) << '\n';
    }
    if (!summary) throw std::runtime_error("write failed: " + (dir / "summary.csv").string());

    std::ofstream raw = open_out(dir / "raw_trials.csv");
    raw << "dataset,model,sketch_dim,frac_observed,n_per_class,trial,seed,accuracy,n_obs,ratio,error\n";
    for (const CellResult& c : result.cells) {
        for (const TrialRecord& t : c.trials) {
            raw << c.key.dataset << ',' << c.key.model << ','
                << (c.key.sketch_dim ? std::to_string(*c.key.sketch_dim) : std::string("raw")) << ','
                << (c.key.frac_observed ? fmt_short(*c.key.frac_observed) : std::string()) << ','
                << (c.key.n_per_class ? std::to_string(*c.key.n_per_class) : std::string()) << ','
                << t.trial << ',' << t.seed << ','
                << (t.ok() ? fmt_fixed(t.accuracy, 6) : std::string()) << ',' << t.n_observed << ','
                << fmt_fixed(t.ratio, 4) << ',' << csv_safe(t.error) << '\n';
        }
    }
    if (!raw) throw std::runtime_error("write failed: " + (dir / "raw_trials.csv").string());
}

void write_curves(const std::vector<CurveResult>& curves, const std::string& out_dir) {
    if (curves.empty()) throw std::invalid_argument("write_curves: empty sweep");
    ExperimentResult merged;
    for (const CurveResult& c : curves)
        for (const CellResult& cell : c.full.cells) merged.cells.push_back(cell);
    std::sort(merged.cells.begin(), merged.cells.end(),
              [](const CellResult& a, const CellResult& b) { return key_less(a.key, b.key); });
    write_results(merged, out_dir);

    const std::filesystem::path dir(out_dir);
    for (const CurveResult& c : curves) {
        std::ofstream f = open_out(dir / curve_file_name(c));
        f << "sweep_value,model,mean_acc,ci95,n\n";
        for (const CurvePoint& p : c.points) {
            f << (c.sweep == "features" ? std::to_string(static_cast<long long>(p.sweep_value))
                                        : fmt_short(p.sweep_value))
              << ',' << p.model << ',' << fmt_fixed(p.stat.mean, 4) << ','
              << (p.stat.ci95 ? fmt_fixed(*p.stat.ci95, 4) : std::string()) << ',' << p.stat.n << '\n';
        }
        if (!f) throw std::runtime_error("write failed: " + (dir / curve_file_name(c)).string());
    }
}

} // namespace gnnbench
