#include "kjl/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace kjl {

KernelSpec KernelSpec::gaussian(double bandwidth_sq) {
    if (!(bandwidth_sq > 0.0) || !std::isfinite(bandwidth_sq))
        throw InvalidSpec("KernelSpec: bandwidth_sq must be positive and finite");
    return KernelSpec{KernelFamily::gaussian, bandwidth_sq};
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ShapeError("kernel_eval: point dimensions differ");
    return std::exp(-squared_distance(x, y) / spec.bandwidth_sq);
}

GramMatrix gram(const KernelSpec& spec, const Matrix& pts) {
    const std::size_t n = pts.rows();
    if (n == 0) throw EmptyData("gram: no points");
    Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        k(i, i) = kernel_eval(spec, pts.row(i), pts.row(i));
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = kernel_eval(spec, pts.row(i), pts.row(j));
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return GramMatrix{SymMatrix(std::move(k)), false, {}, 0.0};
}

Matrix cross_gram(const KernelSpec& spec, const Matrix& rows, const Matrix& cols) {
    if (rows.rows() == 0 || cols.rows() == 0) throw EmptyData("cross_gram: no points");
    if (rows.cols() != cols.cols()) throw ShapeError("cross_gram: point dimensions differ");
    Matrix k(rows.rows(), cols.rows());
    for (std::size_t i = 0; i < rows.rows(); ++i)
        for (std::size_t j = 0; j < cols.rows(); ++j)
            k(i, j) = kernel_eval(spec, rows.row(i), cols.row(j));
    return k;
}

double select_bandwidth(const Matrix& pts, double percentile, SeededRng* rng,
                        std::size_t max_pairs) {
    const std::size_t n = pts.rows();
    if (n < 2) throw EmptyData("select_bandwidth: need at least 2 points");
    if (!(percentile > 0.0 && percentile < 100.0))
        throw InvalidSpec("select_bandwidth: percentile must be in (0, 100)");

    const std::size_t total_pairs = n * (n - 1) / 2;
    std::vector<double> dists;
    if (rng != nullptr && total_pairs > max_pairs) {
        dists.reserve(max_pairs);
        for (std::size_t t = 0; t < max_pairs; ++t) {
            const std::size_t i = static_cast<std::size_t>(rng->next_below(n));
            std::size_t j = static_cast<std::size_t>(rng->next_below(n - 1));
            if (j >= i) ++j;
            dists.push_back(std::sqrt(squared_distance(pts.row(i), pts.row(j))));
        }
    } else {
        dists.reserve(total_pairs);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                dists.push_back(std::sqrt(squared_distance(pts.row(i), pts.row(j))));
    }

    std::sort(dists.begin(), dists.end());
    if (dists.back() == 0.0) throw DegenerateData("select_bandwidth: all interpoint distances are zero");

    // nearest-rank: smallest index r with r/M >= p/100
    const std::size_t m = dists.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(percentile / 100.0 * static_cast<double>(m)));
    rank = std::clamp<std::size_t>(rank, 1, m);
    double sigma = dists[rank - 1];
    if (sigma == 0.0) {
        // duplicate points push low percentiles to zero; take the smallest
        // positive distance so the kernel stays well-defined
        const auto it = std::upper_bound(dists.begin(), dists.end(), 0.0);
        sigma = *it;
    }
    return sigma;
}

GramMatrix center_gram(const GramMatrix& g) {
    if (g.centered) throw StateError("center_gram: already centered");
    const std::size_t n = g.order();
    std::vector<double> row_means(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += g.base(i, j);
        row_means[i] = s / static_cast<double>(n);
        grand += s;
    }
    grand /= static_cast<double>(n) * static_cast<double>(n);

    Matrix centered(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = g.base(i, j) - row_means[i] - row_means[j] + grand;
            centered(i, j) = v;
            centered(j, i) = v;
        }
    }
    return GramMatrix{SymMatrix(std::move(centered)), true, std::move(row_means), grand};
}

std::vector<double> center_cross(const GramMatrix& g, std::span<const double> kx) {
    if (!g.centered) throw StateError("center_cross: gram has no centering statistics");
    const std::size_t n = g.order();
    if (kx.size() != n) throw ShapeError("center_cross: column length mismatch");
    double mean = 0.0;
    for (double v : kx) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = kx[i] - g.row_means[i] - mean + g.grand_mean;
    return out;
}

}  // namespace kjl
