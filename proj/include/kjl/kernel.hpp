#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kjl/linalg.hpp"
#include "kjl/rng.hpp"

namespace kjl {

enum class KernelFamily { gaussian };

/// Kernel parameters. Only the Gaussian family ships; it has k(x,x) = 1 so
/// the feature-norm bound kappa equals 1, which several variance formulas
/// rely on.
struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    double bandwidth_sq = 1.0;  // sigma^2, squared length units of input space

    static KernelSpec gaussian(double bandwidth_sq);
};

/// Kernel matrix over a point set, plus the statistics needed to center
/// out-of-sample columns consistently once centered.
struct GramMatrix {
    SymMatrix base;  // centered form iff `centered`
    bool centered = false;
    std::vector<double> row_means;  // of the uncentered matrix (present iff centered)
    double grand_mean = 0.0;        // of the uncentered matrix (present iff centered)

    std::size_t order() const { return base.order(); }
};

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

/// n x n kernel matrix over the rows of pts (uncentered).
GramMatrix gram(const KernelSpec& spec, const Matrix& pts);

/// Rectangular kernel matrix: entry (i, j) = k(rows_i, cols_j).
Matrix cross_gram(const KernelSpec& spec, const Matrix& rows, const Matrix& cols);

/// Nearest-rank percentile of pairwise Euclidean distances; returns sigma
/// (length units), so bandwidth_sq = sigma^2. When the pair count exceeds
/// max_pairs and an rng is supplied, a uniform random subset of pairs of that
/// size is used instead of the full O(n^2) enumeration.
double select_bandwidth(const Matrix& pts, double percentile, SeededRng* rng = nullptr,
                        std::size_t max_pairs = 1'000'000);

/// K_bar = H K H with H = I - 11^T/n; stores row means and grand mean of the
/// uncentered matrix for out-of-sample use.
GramMatrix center_gram(const GramMatrix& g);

/// Centers a fresh kernel column against the stored training statistics.
std::vector<double> center_cross(const GramMatrix& g, std::span<const double> kx);

}  // namespace kjl
