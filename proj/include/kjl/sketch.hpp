#pragma once

#include <cstdint>
#include <string>

#include "kjl/kernel.hpp"

namespace kjl {

enum class Method { kjl, kpca, nystrom };

struct EmbeddingMeta {
    Method method = Method::kjl;
    int n = 0;
    int d = 0;
    std::uint64_t seed = 0;
    double bandwidth_sq = 0.0;
    bool centered = false;
};

/// N x d matrix of projected points plus provenance.
struct Embedding {
    Matrix points;
    EmbeddingMeta meta;
};

/// Fitted kernel random-projection operator. Stores the collapsed sketch
/// P = Z K / (n^{3/2} sqrt(d)) rather than Z and K separately, so mapping a
/// point costs n kernel evaluations plus a d x n product.
struct SketchProjector {
    Matrix subsample;  // n x D
    KernelSpec spec;
    bool centered = false;    // gram was centered before sketching
    bool center_oos = true;   // also center out-of-sample kernel columns
    GramMatrix gram;          // n x n, centered iff `centered`
    Matrix sketch;            // d x n, the matrix P
    std::uint64_t seed = 0;
    int n = 0;
    int d = 0;
};

/// Draws Z (d x n i.i.d. standard normals from `seed`), assembles the Gram
/// matrix on pts (centered iff `centered`), and collapses them into P.
/// Refitting with identical inputs reproduces P bitwise.
SketchProjector fit(const Matrix& pts, const KernelSpec& spec, int d, std::uint64_t seed,
                    bool centered, bool center_oos = true);

/// Same as fit() but reuses a prebuilt Gram matrix over pts; used by the
/// experiment drivers to amortize kernel evaluation across repetitions.
SketchProjector fit_with_gram(const Matrix& pts, const KernelSpec& spec, GramMatrix g, int d,
                              std::uint64_t seed, bool center_oos = true);

/// Maps one point to R^d: P applied to its (optionally centered) kernel column.
std::vector<double> transform(const SketchProjector& p, std::span<const double> x);

/// Maps every row of pts; bitwise equal to looping transform() over rows.
Embedding transform_batch(const SketchProjector& p, const Matrix& pts);

/// Euclidean inner product of two embedded points.
double sketch_inner(const SketchProjector& p, std::span<const double> x, std::span<const double> y);

/// Columns are independent draws v = K z / sqrt(n) with z standard normal,
/// i.e. samples from N(0, K^2 / n) -- the coefficient law behind the sketch.
Matrix sample_sketch_directions(const GramMatrix& g, SeededRng& rng, int count);

/// Analytic mean of sketch_inner over fresh sketches for a fixed subsample:
/// k_x^T K^2 k_y / n^3, computed from the projector's stored Gram.
double expected_sketch_inner(const SketchProjector& p, std::span<const double> x,
                             std::span<const double> y);

void save_projector(const SketchProjector& p, const std::string& path);
SketchProjector load_sketch_projector(const std::string& path);

}  // namespace kjl
