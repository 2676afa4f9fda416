#include "kjl/sketch.hpp"

#include <cmath>

namespace kjl {

namespace {

// Kernel column of x against the projector's subsample, centered the same
// way transform() will consume it.
std::vector<double> kernel_column(const SketchProjector& p, std::span<const double> x) {
    const std::size_t n = p.subsample.rows();
    std::vector<double> kx(n);
    for (std::size_t i = 0; i < n; ++i) kx[i] = kernel_eval(p.spec, p.subsample.row(i), x);
    if (p.centered && p.center_oos) return center_cross(p.gram, kx);
    return kx;
}

double sketch_scale(std::size_t n, std::size_t d) {
    const double nd = static_cast<double>(n);
    return 1.0 / (nd * std::sqrt(nd * static_cast<double>(d)));
}

}  // namespace

SketchProjector fit(const Matrix& pts, const KernelSpec& spec, int d, std::uint64_t seed,
                    bool centered, bool center_oos) {
    if (pts.rows() == 0) throw EmptyData("fit: no subsample points");
    GramMatrix g = gram(spec, pts);
    if (centered) g = center_gram(g);
    return fit_with_gram(pts, spec, std::move(g), d, seed, center_oos);
}

SketchProjector fit_with_gram(const Matrix& pts, const KernelSpec& spec, GramMatrix g, int d,
                              std::uint64_t seed, bool center_oos) {
    const std::size_t n = pts.rows();
    if (n == 0) throw EmptyData("fit: no subsample points");
    if (g.order() != n) throw ShapeError("fit: gram order does not match subsample size");
    if (d < 1) throw InvalidRank("fit: projection dimension must be >= 1");

    SeededRng rng(seed);
    Matrix z = gaussian_matrix(rng, static_cast<std::size_t>(d), n);
    Matrix p = matmul(z, g.base.full());
    const double scale = sketch_scale(n, static_cast<std::size_t>(d));
    for (double& v : p.data()) v *= scale;

    SketchProjector out;
    out.subsample = pts;
    out.spec = spec;
    out.centered = g.centered;
    out.center_oos = center_oos;
    out.gram = std::move(g);
    out.sketch = std::move(p);
    out.seed = seed;
    out.n = static_cast<int>(n);
    out.d = d;
    return out;
}

std::vector<double> transform(const SketchProjector& p, std::span<const double> x) {
    if (x.size() != p.subsample.cols()) throw ShapeError("transform: point dimension mismatch");
    return matvec(p.sketch, kernel_column(p, x));
}

Embedding transform_batch(const SketchProjector& p, const Matrix& pts) {
    Embedding out;
    out.meta = EmbeddingMeta{Method::kjl,     p.n,
                             p.d,             p.seed,
                             p.spec.bandwidth_sq, p.centered};
    if (pts.rows() == 0) {
        out.points = Matrix(0, static_cast<std::size_t>(p.d));
        return out;
    }
    if (pts.cols() != p.subsample.cols()) throw ShapeError("transform_batch: point dimension mismatch");

    Matrix columns = cross_gram(p.spec, pts, p.subsample);
    if (p.centered && p.center_oos) {
        for (std::size_t i = 0; i < columns.rows(); ++i) {
            const std::vector<double> c = center_cross(p.gram, columns.row(i));
            std::copy(c.begin(), c.end(), columns.row(i).begin());
        }
    }
    out.points = matmul(columns, transpose(p.sketch));
    return out;
}

double sketch_inner(const SketchProjector& p, std::span<const double> x,
                    std::span<const double> y) {
    return dot(transform(p, x), transform(p, y));
}

Matrix sample_sketch_directions(const GramMatrix& g, SeededRng& rng, int count) {
    if (count < 1) throw InvalidSize("sample_sketch_directions: count must be >= 1");
    const std::size_t n = g.order();
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    Matrix out(n, static_cast<std::size_t>(count));
    std::vector<double> z(n);
    for (int c = 0; c < count; ++c) {
        for (double& v : z) v = rng.next_gaussian();
        const std::vector<double> col = matvec(g.base.full(), z);
        for (std::size_t i = 0; i < n; ++i) out(i, static_cast<std::size_t>(c)) = scale * col[i];
    }
    return out;
}

double expected_sketch_inner(const SketchProjector& p, std::span<const double> x,
                             std::span<const double> y) {
    const std::vector<double> kx = kernel_column(p, x);
    const std::vector<double> ky = kernel_column(p, y);
    const std::vector<double> a = matvec(p.gram.base.full(), kx);
    const std::vector<double> b = matvec(p.gram.base.full(), ky);
    const double n = static_cast<double>(p.n);
    return dot(a, b) / (n * n * n);
}

}  // namespace kjl
