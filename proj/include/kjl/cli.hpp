#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kjl/data.hpp"

namespace kjl {

/// Parameters shared by the CLI subcommands; each command reads the subset
/// it needs. Flags override config-file values upstream of this struct.
struct RunConfig {
    // input: CSV dataset or synthetic shape (exactly one)
    std::string data_path;
    std::string synth;  // cluster_in_cluster | crescent_full_moon | gaussian_mixture
    int synth_n = 5000;
    std::optional<int> label_col;  // column index; negative counts from the end
    bool has_header = false;
    std::optional<bool> standardize_features;  // default: on for CSV, off for synth

    std::string method = "kjl";  // kjl | kpca | nystrom | raw
    int n = 0;                   // 0 -> max(200, N/100)
    int d = 0;                   // 0 -> 10k
    int k = 0;                   // 0 -> number of label classes
    std::uint64_t seed = 0;
    int reps = 30;
    double percentile = 25.0;
    bool center = true;
    bool center_oos = true;
    std::string kpca_mode = "unnormalized";  // unnormalized | unit_norm
    int restarts = 10;
    int max_iter = 300;
    bool paired = true;  // methods within a rep share the subsample

    // sweep
    std::string axis = "d";
    std::vector<int> grid;

    // theory
    int oracle_m = 2000;
    int probes = 50;
    int theory_reps = 20;
    int theory_d_fixed = 500;
    int theory_n_fixed = 0;  // 0 -> full reference sample
    std::vector<int> theory_n_grid = {8, 16, 32, 64, 128, 200};
    std::vector<int> theory_d_grid = {4, 8, 16, 32, 64, 128};
    int dist_draws = 10000;
    int dist_subsample = 50;
    int dist_d = 5;
    int mc_draws = 500;

    std::string out_dir = ".";
    int workers = 0;  // 0 -> KJL_WORKERS env var, else 1
};

struct BenchRecord {
    std::string method;
    int rep = 0;
    std::uint64_t seed = 0;
    int n = 0;
    int d = 0;
    int k = 0;
    double rand_index = 0.0;
    double preprocess_seconds = 0.0;  // fit + transform_batch, never k-means
};

struct BenchSummary {
    std::string method;
    int reps = 0;
    double mean_ri = 0.0;
    double std_ri = 0.0;
    bool single_rep = false;  // std degenerate at reps == 1
    double mean_preprocess_seconds = 0.0;
};

struct BenchOutput {
    std::vector<BenchRecord> records;
    std::vector<BenchSummary> summaries;
};

/// Loads the dataset named by the config (CSV or synthetic), applying the
/// standardization default for its source.
Dataset load_input(const RunConfig& cfg);

/// Benchmark core: per repetition, a fresh seed-derived subsample and
/// projector per method, preprocessing timed around fit + transform_batch,
/// then k-means and Rand index against the dataset labels.
BenchOutput run_bench(const Dataset& data, const std::vector<std::string>& methods,
                      const RunConfig& cfg);

int cmd_embed(const RunConfig& cfg);
int cmd_bench(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);
int cmd_theory(const RunConfig& cfg);
int cmd_synth(const RunConfig& cfg);

}  // namespace kjl
