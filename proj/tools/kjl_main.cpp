#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "kjl/cli.hpp"
#include "kjl/errors.hpp"

namespace {

void add_input_flags(CLI::App* cmd, kjl::RunConfig& cfg) {
    cmd->add_option("--data", cfg.data_path, "CSV dataset path");
    cmd->add_option("--synth", cfg.synth,
                    "synthetic shape: cluster_in_cluster | crescent_full_moon | gaussian_mixture");
    cmd->add_option("--synth-n", cfg.synth_n, "synthetic point count");
    cmd->add_option("--label", cfg.label_col,
                    "label column index (negative counts from the end)");
    cmd->add_flag("--header", cfg.has_header, "CSV has a header row");
    cmd->add_flag_callback("--standardize", [&cfg] { cfg.standardize_features = true; },
                           "z-score features (default: on for CSV, off for synthetic)");
    cmd->add_flag_callback("--no-standardize", [&cfg] { cfg.standardize_features = false; },
                           "disable feature z-scoring");
    cmd->add_option("--seed", cfg.seed, "master seed");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--workers", cfg.workers,
                    "worker threads for repetitions (KJL_WORKERS overrides 0)");
}

void add_method_flags(CLI::App* cmd, kjl::RunConfig& cfg) {
    cmd->add_option("--method", cfg.method, "kjl | kpca | nystrom | raw | all | comma list");
    cmd->add_option("--n", cfg.n, "subsample size (0: max(200, N/100))");
    cmd->add_option("--d", cfg.d, "projection dimension (0: 10k)");
    cmd->add_option("--k", cfg.k, "cluster count (0: from labels)");
    cmd->add_option("--percentile", cfg.percentile, "bandwidth percentile of distances");
    cmd->add_flag("--center,!--no-center", cfg.center, "center the Gram matrix (kjl)");
    cmd->add_flag("--center-oos,!--no-center-oos", cfg.center_oos,
                  "also center out-of-sample columns (kjl)");
    cmd->add_option("--kpca-mode", cfg.kpca_mode, "unnormalized | unit_norm");
    cmd->add_option("--restarts", cfg.restarts, "k-means restarts");
    cmd->add_option("--max-iter", cfg.max_iter, "k-means iteration cap");
    cmd->add_flag("--paired,!--no-paired", cfg.paired,
                  "methods within a repetition share the subsample");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kernel random-projection embeddings, baselines, and experiments"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; flags override it");

    kjl::RunConfig cfg;

    CLI::App* embed = app.add_subcommand("embed", "project a dataset to R^d and write a CSV");
    add_input_flags(embed, cfg);
    add_method_flags(embed, cfg);

    CLI::App* bench = app.add_subcommand(
        "bench", "repeated preprocessing-time / Rand-index benchmark");
    add_input_flags(bench, cfg);
    add_method_flags(bench, cfg);
    bench->add_option("--reps", cfg.reps, "repetitions");

    CLI::App* sweep = app.add_subcommand("sweep", "Rand index across an n or d grid");
    add_input_flags(sweep, cfg);
    add_method_flags(sweep, cfg);
    sweep->add_option("--reps", cfg.reps, "repetitions per grid value");
    sweep->add_option("--axis", cfg.axis, "n | d");
    sweep->add_option("--grid", cfg.grid, "grid values")->delimiter(',');

    CLI::App* theory = app.add_subcommand(
        "theory", "operator-convergence experiments against a reference oracle");
    add_input_flags(theory, cfg);
    theory->add_option("--percentile", cfg.percentile, "bandwidth percentile of distances");
    theory->add_option("--m", cfg.oracle_m, "reference sample size");
    theory->add_option("--probes", cfg.probes, "probe pairs per repetition");
    theory->add_option("--reps", cfg.theory_reps, "repetitions per grid value");
    theory->add_option("--d-fixed", cfg.theory_d_fixed, "fixed d for the n-axis experiment");
    theory->add_option("--n-fixed", cfg.theory_n_fixed,
                       "fixed n for the d-axis experiment (0: full reference sample)");
    theory->add_option("--n-grid", cfg.theory_n_grid, "subsample grid")->delimiter(',');
    theory->add_option("--d-grid", cfg.theory_d_grid, "dimension grid")->delimiter(',');
    theory->add_option("--dist-draws", cfg.dist_draws, "sketch draws for the distribution check");
    theory->add_option("--mc-draws", cfg.mc_draws,
                       "Monte Carlo sketches per cell in the variance check");

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset CSV");
    add_input_flags(synth, cfg);

    CLI11_PARSE(app, argc, argv);

    try {
        if (embed->parsed()) return kjl::cmd_embed(cfg);
        if (bench->parsed()) return kjl::cmd_bench(cfg);
        if (sweep->parsed()) return kjl::cmd_sweep(cfg);
        if (theory->parsed()) return kjl::cmd_theory(cfg);
        if (synth->parsed()) return kjl::cmd_synth(cfg);
    } catch (const kjl::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
