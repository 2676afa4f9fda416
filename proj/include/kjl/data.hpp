#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kjl/linalg.hpp"
#include "kjl/rng.hpp"

namespace kjl {

struct Dataset {
    Matrix features;  // N x D
    std::vector<int> labels;
    bool has_labels = false;
    std::string name;
    std::vector<std::size_t> constant_features;  // flagged by standardize()

    std::size_t size() const { return features.rows(); }
    std::size_t dim() const { return features.cols(); }
    int num_classes() const;
};

enum class SynthShape { cluster_in_cluster, crescent_full_moon, gaussian_mixture };

/// Parameters for the synthetic generators. The two 2-D shapes are linearly
/// non-separable but kernel-separable; defaults were chosen to keep a clear
/// gap between the inner body and the outer band.
struct SynthSpec {
    SynthShape shape = SynthShape::cluster_in_cluster;
    int n_points = 5000;
    double noise = 0.2;
    std::uint64_t seed = 0;

    // cluster_in_cluster: inner Gaussian disc of radius r1, annulus [r2, r3]
    double r1 = 1.0;
    double r2 = 2.5;
    double r3 = 3.5;

    // crescent_full_moon: filled disc plus an arc band
    double disc_radius = 1.0;
    double crescent_radius = 3.0;
    double crescent_span_deg = 220.0;
    double crescent_width = 0.5;

    // gaussian_mixture: weighted spherical components
    std::vector<std::vector<double>> means;
    std::vector<double> weights;
    double sigma = 1.0;
};

Dataset generate(const SynthSpec& spec);

/// Label column selector: by zero-based index or by header name.
using LabelColumn = std::variant<std::size_t, std::string>;

/// Parses a rectangular numeric CSV (comma or semicolon, auto-detected).
/// String labels map to dense integer ids in first-appearance order.
Dataset load_csv(const std::string& path, std::optional<LabelColumn> label_col, bool has_header);

void save_csv(const Dataset& d, const std::string& path);
void save_matrix_csv(const Matrix& m, const std::string& path,
                     const std::vector<std::string>& header = {});

/// Per-feature z-score with population std; zero-variance features pass
/// through unchanged and are flagged in the result.
Dataset standardize(const Dataset& d);

struct Subsample {
    Matrix points;
    std::vector<std::size_t> indices;
};

/// Uniform without replacement, deterministic per seed.
Subsample subsample(const Dataset& d, std::size_t n, std::uint64_t seed);
Subsample subsample(const Matrix& features, std::size_t n, std::uint64_t seed);

/// Subsample size rule used by the benchmarks: max(200, round(N/100)).
int paper_n(int total);

}  // namespace kjl
