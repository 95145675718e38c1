// bench: seeded graph-model experiments -> CSV tables and sweep curves.
#include "CLI11.hpp"

#include "gnnbench/bench.hpp"
#include "gnnbench/dataset.hpp"
#include "gnnbench/selftest.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

namespace {

void apply_runtime_opts(int threads, bool progress) {
    if (threads > 0) {
#ifdef _OPENMP
        omp_set_num_threads(threads);
#else
        if (threads != 1) std::cerr << "note: built without OpenMP, running single-threaded\n";
#endif
    }
    if (progress) setenv("GNNBENCH_PROGRESS", "1", 1);
}

void print_summary(const gnnbench::ExperimentResult& res) {
    for (const auto& cell : res.cells) {
        const std::string dim =
            cell.key.sketch_dim ? std::to_string(*cell.key.sketch_dim) : std::string("raw");
        std::printf("%-12s %-10s dim=%-5s", cell.key.dataset.c_str(), cell.key.model.c_str(),
                    dim.c_str());
        if (cell.key.frac_observed) std::printf(" frac=%-6g", *cell.key.frac_observed);
        if (cell.key.n_per_class) std::printf(" per_class=%-4d", *cell.key.n_per_class);
        std::printf(" acc=%.4f", cell.stat.mean);
        if (cell.stat.ci95) std::printf(" +-%.4f", *cell.stat.ci95);
        std::printf(" (n=%d)\n", cell.stat.n);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph model benchmark: seeded trials, 95% CIs, CSV output"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string dataset_dir;
    int threads = 0;
    long long seed_override = -1;
    bool progress = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config (JSON)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory [out]");
        sub->add_option("--threads", threads, "OpenMP thread count (0 = runtime default)");
        sub->add_option("--seed", seed_override, "override the config's base_seed");
        sub->add_flag("--progress", progress, "per-trial progress on stderr");
    };

    CLI::App* run = app.add_subcommand("run", "run the config's experiment grid");
    add_common(run);
    CLI::App* sweep_f = app.add_subcommand("sweep-features", "accuracy vs. sketch dimension");
    add_common(sweep_f);
    CLI::App* sweep_o = app.add_subcommand("sweep-fraction", "accuracy vs. observed fraction");
    add_common(sweep_o);
    CLI::App* validate = app.add_subcommand("validate-dataset", "load a dataset directory and report");
    validate->add_option("dir", dataset_dir, "dataset directory")->required();
    CLI::App* selftest = app.add_subcommand("selftest", "oracle/invariant suite on synthetic data");
    selftest->add_option("--threads", threads, "OpenMP thread count (0 = runtime default)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            gnnbench::Dataset ds = gnnbench::load_dataset(dataset_dir);
            std::printf("name:       %s\n", ds.name.c_str());
            std::printf("nodes:      %lld\n", static_cast<long long>(ds.n_nodes()));
            std::printf("features:   %lld\n", static_cast<long long>(ds.n_features()));
            std::printf("classes:    %d\n", ds.n_classes);
            std::printf("edges:      %lld\n", static_cast<long long>(ds.graph.nnz() / 2));
            std::printf("ok\n");
            return 0;
        }
        if (selftest->parsed()) {
            apply_runtime_opts(threads, false);
            bool all_pass = true;
            for (const auto& check : gnnbench::run_selftest()) {
                std::printf("%s %s: %s\n", check.pass ? "PASS" : "FAIL", check.name.c_str(),
                            check.detail.c_str());
                all_pass = all_pass && check.pass;
            }
            return all_pass ? 0 : 1;
        }

        apply_runtime_opts(threads, progress);
        gnnbench::ExperimentConfig cfg = gnnbench::load_config(config_path);
        if (seed_override >= 0) cfg.base_seed = static_cast<std::uint64_t>(seed_override);

        if (run->parsed()) {
            gnnbench::ExperimentResult res = gnnbench::run_experiment(cfg);
            gnnbench::write_results(res, out_dir);
            print_summary(res);
        } else {
            auto curves =
                sweep_f->parsed() ? gnnbench::sweep_features(cfg) : gnnbench::sweep_fraction(cfg);
            gnnbench::write_curves(curves, out_dir);
            gnnbench::ExperimentResult merged;
            for (const auto& c : curves)
                for (const auto& cell : c.full.cells) merged.cells.push_back(cell);
            print_summary(merged);
        }
        std::printf("wrote %s/summary.csv\n", out_dir.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
