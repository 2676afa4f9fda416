#include "kjl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kjl {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw ShapeError("from_rows: ragged row lengths");
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

SymMatrix::SymMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InvalidMatrix("symmetric matrix must be square");
    if (m_.rows() == 0) throw InvalidMatrix("symmetric matrix must have order >= 1");
    if (!m_.all_finite()) throw InvalidMatrix("symmetric matrix has non-finite entries");
    for (std::size_t i = 0; i < m_.rows(); ++i)
        for (std::size_t j = i + 1; j < m_.cols(); ++j)
            if (m_(i, j) != m_(j, i)) throw InvalidMatrix("matrix is not exactly symmetric");
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& d) {
    SymMatrix s(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
    return s;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < order(); ++i) t += m_(i, i);
    return t;
}

namespace {

double off_diagonal_frobenius(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
}

double frobenius(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

// One Jacobi rotation zeroing a(p,q), updating a and the accumulated
// eigenvector columns of v.
void jacobi_rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
    const std::size_t n = a.rows();
    const double apq = a(p, q);
    if (apq == 0.0) return;
    const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
    double t;
    if (std::abs(theta) > 1e150) {
        t = 1.0 / (2.0 * theta);  // avoid overflow in theta*theta
    } else {
        t = ((theta >= 0.0) ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;
    const double tau = s / (1.0 + c);

    const double app = a(p, p);
    const double aqq = a(q, q);
    a(p, p) = app - t * apq;
    a(q, q) = aqq + t * apq;
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == p || i == q) continue;
        const double aip = a(i, p);
        const double aiq = a(i, q);
        a(i, p) = aip - s * (aiq + tau * aip);
        a(p, i) = a(i, p);
        a(i, q) = aiq + s * (aip - tau * aiq);
        a(q, i) = a(i, q);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double vip = v(i, p);
        const double viq = v(i, q);
        v(i, p) = vip - s * (viq + tau * vip);
        v(i, q) = viq + s * (vip - tau * viq);
    }
}

}  // namespace

EigenDecomposition sym_eigen(const SymMatrix& sym) {
    const std::size_t n = sym.order();
    Matrix a = sym.full();
    Matrix v = Matrix::identity(n);

    const double tol = 1e-12 * std::max(frobenius(a), 1e-300);
    constexpr int kMaxSweeps = 100;
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_frobenius(a) <= tol) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (a(p, q) != 0.0) jacobi_rotate(a, v, p, q);
    }
    if (!converged && off_diagonal_frobenius(a) > tol)
        throw ConvergenceFailure("sym_eigen: Jacobi sweeps did not converge within cap");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(idx[k], idx[k]);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, idx[k]);
    }
    return out;
}

SymMatrix rank_pinv(const SymMatrix& a, std::size_t d, double floor) {
    const std::size_t n = a.order();
    if (d < 1 || d > n) throw InvalidRank("rank_pinv: d must be in [1, order]");
    const EigenDecomposition eig = sym_eigen(a);

    Matrix out(n, n);
    for (std::size_t k = 0; k < d; ++k) {
        const double lambda = eig.eigenvalues[k];
        if (lambda <= floor) continue;  // dropped, not inverted
        const double inv = 1.0 / lambda;
        for (std::size_t i = 0; i < n; ++i) {
            const double wi = inv * eig.eigenvectors(i, k);
            for (std::size_t j = i; j < n; ++j) {
                out(i, j) += wi * eig.eigenvectors(j, k);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) out(i, j) = out(j, i);
    return SymMatrix(std::move(out));
}

double default_eigen_floor(double lambda_max) { return 1e-10 * lambda_max; }

double largest_eigenvalue_psd(const SymMatrix& a) {
    const std::size_t n = a.order();
    double trace = a.trace();
    if (trace == 0.0 && frobenius(a.full()) == 0.0)
        throw DegenerateData("largest_eigenvalue_psd: zero matrix");

    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> w(n);
    double lambda = 0.0;
    constexpr int kMaxIters = 50000;
    int stall = 0;
    for (int it = 0; it < kMaxIters; ++it) {
        w = matvec(a.full(), v);
        double norm_sq = dot(w, w);
        if (norm_sq == 0.0) {
            // start vector happened to be in the null space; restart from e_unit
            std::fill(v.begin(), v.end(), 0.0);
            v[it % n] = 1.0;
            continue;
        }
        const double next = dot(v, w);
        const double norm = std::sqrt(norm_sq);
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
        if (std::abs(next - lambda) <= 1e-14 * std::max(std::abs(next), 1e-300)) {
            if (++stall >= 3) return next;
        } else {
            stall = 0;
        }
        lambda = next;
    }
    return lambda;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimensions do not conform");
    Matrix c(a.rows(), b.cols());
    // ikj order: contraction index advances in ascending order for every
    // output element, so results are bitwise identical to a plain dot loop.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* crow = c.row(i).data();
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            const double* brow = b.row(k).data();
            for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw ShapeError("matvec: dimensions do not conform");
    std::vector<double> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
    return y;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

SymMatrix sym_square(const SymMatrix& a) {
    // (A^2)_ij and (A^2)_ji accumulate the same products in the same order
    // when A is exactly symmetric, so mirroring the upper triangle is exact.
    const std::size_t n = a.order();
    const Matrix& m = a.full();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            const double* ri = m.row(i).data();
            const double* rj = m.row(j).data();
            for (std::size_t k = 0; k < n; ++k) s += ri[k] * rj[k];
            out(i, j) = s;
            out(j, i) = s;
        }
    }
    return SymMatrix(std::move(out));
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ShapeError("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ShapeError("squared_distance: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

}  // namespace kjl
