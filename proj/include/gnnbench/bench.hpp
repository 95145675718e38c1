#pragma once

#include "gnnbench/dataset.hpp"
#include "gnnbench/models.hpp"
#include "gnnbench/nn.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gnnbench {

/// Table-style regime: n_per_class observed training nodes per class plus a
/// fixed-size validation sample from the remainder.
struct PerClassRegime {
    int n_per_class = 20;
    int n_val = 500;
};

/// Fraction regime: a fraction of all nodes is observed; validation is carved
/// from inside the observed set.
struct FractionRegime {
    double frac_observed = 0.5;
    double val_frac_of_observed = 0.2;
};

using Regime = std::variant<PerClassRegime, FractionRegime>;

/// One experiment: datasets x models x sketch dims at a single regime point.
/// Mirrored field-for-field by the JSON config; unknown keys are an error.
struct ExperimentConfig {
    std::vector<std::string> datasets;
    std::vector<ModelSpec> models;
    Regime regime = FractionRegime{};
    std::optional<std::vector<index_t>> sketch_dims;  // nullopt = raw features
    std::vector<double> fracs;  // sweep-fraction grid; empty = default grid
    int n_trials = 40;
    std::uint64_t base_seed = 1;
    TrainConfig train;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

struct MeanCi {
    double mean = 0.0;
    std::optional<double> half_width;  // absent for n < 2
};

/// Mean and 1.96 * s / sqrt(n) with the n-1 sample standard deviation.
MeanCi ci95(const std::vector<double>& samples);

/// One (trial, model) outcome. A failed trial keeps its row with the error
/// message; it is excluded from means but never silently dropped.
struct TrialRecord {
    int trial = 0;
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    index_t n_observed = 0;
    double ratio = 0.0;  // n_observed / effective feature dimension
    std::string error;

    bool ok() const { return error.empty(); }
};

struct SummaryStat {
    double mean = 0.0;
    std::optional<double> ci95;
    int n = 0;                    // successful trials
    std::vector<double> samples;  // per-trial accuracies retained
};

struct CellKey {
    std::string dataset;
    std::string model;
    std::optional<index_t> sketch_dim;    // nullopt = raw
    std::optional<double> frac_observed;  // fraction regime only
    std::optional<int> n_per_class;       // per-class regime only
};

struct CellResult {
    CellKey key;
    SummaryStat stat;
    std::vector<TrialRecord> trials;  // ordered by trial index
};

struct ExperimentResult {
    std::vector<CellResult> cells;  // deterministic lexicographic key order
};

/// One seeded trial of one model. The split / sketch / init generators are
/// derived from the seed alone (stream_seed), so every model of a seed sees
/// the same sketch and the same split, and an identically seeded init stream.
double run_trial(const Dataset& dataset, const ModelSpec& model, const Regime& regime,
                 std::optional<index_t> sketch_dim, std::uint64_t seed,
                 const TrainConfig& train_cfg);

/// All trials of the config grid, seeds base_seed .. base_seed + n_trials - 1.
/// Trials run concurrently (deterministic regardless of thread count); a cell
/// whose every trial failed is an error.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct CurvePoint {
    double sweep_value = 0.0;  // sketch dim or observed fraction
    std::string model;
    SummaryStat stat;
};

struct CurveResult {
    std::string dataset;
    std::string sweep;  // "features" | "fraction"
    std::vector<CurvePoint> points;
    ExperimentResult full;  // underlying cells incl. raw trials
};

/// Accuracy vs. sketch dimension at the config's (fraction) regime point.
/// Grid = cfg.sketch_dims, or the default grid capped at the raw dimension.
std::vector<CurveResult> sweep_features(const ExperimentConfig& cfg);

/// Accuracy vs. observed fraction at a fixed sketch dim (or raw features).
/// Grid = cfg.fracs, or the default grid.
std::vector<CurveResult> sweep_fraction(const ExperimentConfig& cfg);

/// Default sweep grids.
std::vector<index_t> default_feature_grid(index_t raw_dim);
std::vector<double> default_fraction_grid();

/// summary.csv + raw_trials.csv under out_dir (created if needed).
void write_results(const ExperimentResult& result, const std::string& out_dir);

/// curve_<dataset>_<sweep>.csv per dataset, plus summary/raw via write_results.
void write_curves(const std::vector<CurveResult>& curves, const std::string& out_dir);

} // namespace gnnbench
