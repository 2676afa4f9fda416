#include "kjl/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace kjl {

namespace {

// Top-d eigenpairs above the shared floor; throws RankDeficient when fewer
// survive, reporting how many did.
std::pair<std::vector<double>, Matrix> top_eigenpairs(const SymMatrix& a, int d,
                                                      const char* who) {
    const std::size_t n = a.order();
    if (d < 1 || static_cast<std::size_t>(d) > n)
        throw InvalidRank(std::string(who) + ": d must be in [1, n]");
    const EigenDecomposition eig = sym_eigen(a);
    const double floor = default_eigen_floor(std::max(eig.eigenvalues.front(), 0.0));

    int kept = 0;
    while (kept < d && eig.eigenvalues[static_cast<std::size_t>(kept)] > floor) ++kept;
    if (kept < d)
        throw RankDeficient(std::string(who) + ": only " + std::to_string(kept) +
                                " eigenvalues above floor, requested " + std::to_string(d),
                            kept);

    std::vector<double> values(eig.eigenvalues.begin(), eig.eigenvalues.begin() + d);
    Matrix vectors(static_cast<std::size_t>(d), n);  // row k = eigenvector k
    for (int k = 0; k < d; ++k)
        for (std::size_t i = 0; i < n; ++i)
            vectors(static_cast<std::size_t>(k), i) = eig.eigenvectors(i, static_cast<std::size_t>(k));
    return {std::move(values), std::move(vectors)};
}

std::vector<double> raw_kernel_column(const KernelSpec& spec, const Matrix& subsample,
                                      std::span<const double> x) {
    std::vector<double> kx(subsample.rows());
    for (std::size_t i = 0; i < subsample.rows(); ++i)
        kx[i] = kernel_eval(spec, subsample.row(i), x);
    return kx;
}

}  // namespace

KpcaProjector kpca_fit(const Matrix& pts, const KernelSpec& spec, int d, KpcaMode mode) {
    GramMatrix centered = center_gram(gram(spec, pts));
    auto [values, vectors] = top_eigenpairs(centered.base, d, "kpca_fit");

    if (mode == KpcaMode::unit_norm) {
        for (int k = 0; k < d; ++k) {
            const double s = 1.0 / std::sqrt(values[static_cast<std::size_t>(k)]);
            for (double& v : vectors.row(static_cast<std::size_t>(k))) v *= s;
        }
    }

    KpcaProjector out;
    out.subsample = pts;
    out.spec = spec;
    out.centered_gram = std::move(centered);
    out.alphas = std::move(vectors);
    out.eigenvalues = std::move(values);
    out.mode = mode;
    out.d = d;
    return out;
}

std::vector<double> kpca_transform(const KpcaProjector& p, std::span<const double> x) {
    if (x.size() != p.subsample.cols()) throw ShapeError("kpca_transform: point dimension mismatch");
    std::vector<double> kx = raw_kernel_column(p.spec, p.subsample, x);
    if (p.mode == KpcaMode::unit_norm) kx = center_cross(p.centered_gram, kx);
    return matvec(p.alphas, kx);
}

Embedding kpca_transform_batch(const KpcaProjector& p, const Matrix& pts) {
    Embedding out;
    out.meta = EmbeddingMeta{Method::kpca, static_cast<int>(p.subsample.rows()),
                             p.d,          0,
                             p.spec.bandwidth_sq, p.mode == KpcaMode::unit_norm};
    if (pts.rows() == 0) {
        out.points = Matrix(0, static_cast<std::size_t>(p.d));
        return out;
    }
    Matrix columns = cross_gram(p.spec, pts, p.subsample);
    if (p.mode == KpcaMode::unit_norm) {
        for (std::size_t i = 0; i < columns.rows(); ++i) {
            const std::vector<double> c = center_cross(p.centered_gram, columns.row(i));
            std::copy(c.begin(), c.end(), columns.row(i).begin());
        }
    }
    out.points = matmul(columns, transpose(p.alphas));
    return out;
}

NystromProjector nystrom_fit(const Matrix& pts, const KernelSpec& spec, int d) {
    const GramMatrix g = gram(spec, pts);
    auto [values, vectors] = top_eigenpairs(g.base, d, "nystrom_fit");
    for (int k = 0; k < d; ++k) {
        const double s = 1.0 / std::sqrt(values[static_cast<std::size_t>(k)]);
        for (double& v : vectors.row(static_cast<std::size_t>(k))) v *= s;
    }

    NystromProjector out;
    out.subsample = pts;
    out.spec = spec;
    out.map = std::move(vectors);
    out.eigenvalues = std::move(values);
    out.d = d;
    return out;
}

std::vector<double> nystrom_transform(const NystromProjector& p, std::span<const double> x) {
    if (x.size() != p.subsample.cols())
        throw ShapeError("nystrom_transform: point dimension mismatch");
    return matvec(p.map, raw_kernel_column(p.spec, p.subsample, x));
}

Embedding nystrom_transform_batch(const NystromProjector& p, const Matrix& pts) {
    Embedding out;
    out.meta = EmbeddingMeta{Method::nystrom, static_cast<int>(p.subsample.rows()),
                             p.d,             0,
                             p.spec.bandwidth_sq, false};
    if (pts.rows() == 0) {
        out.points = Matrix(0, static_cast<std::size_t>(p.d));
        return out;
    }
    out.points = matmul(cross_gram(p.spec, pts, p.subsample), transpose(p.map));
    return out;
}

}  // namespace kjl
