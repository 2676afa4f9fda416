#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kjl/errors.hpp"

namespace kjl {

/// Dense row-major matrix of doubles. Sized for n up to a few thousand;
/// everything in this project is dense by design.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

    bool all_finite() const noexcept;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Symmetric matrix. Construction checks entries are finite and that
/// a(i,j) == a(j,i) exactly; everything downstream relies on that.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t order) : m_(order, order) {}
    explicit SymMatrix(Matrix m);

    static SymMatrix identity(std::size_t n) { return SymMatrix(Matrix::identity(n)); }
    static SymMatrix diagonal(const std::vector<double>& d);

    std::size_t order() const noexcept { return m_.rows(); }

    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    /// Sets a(i,j) and a(j,i) together.
    void set(std::size_t i, std::size_t j, double v) {
        m_(i, j) = v;
        m_(j, i) = v;
    }

    const Matrix& full() const noexcept { return m_; }

    double trace() const;

private:
    Matrix m_;
};

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // sorted non-increasing
    Matrix eigenvectors;              // orthonormal columns, column i pairs with eigenvalues[i]
};

/// Cyclic Jacobi eigensolver for symmetric matrices. Iterates sweeps until the
/// off-diagonal Frobenius norm drops below 1e-12 * ||A||_F, capped at 100 sweeps.
EigenDecomposition sym_eigen(const SymMatrix& a);

/// Rank-d pseudo-inverse from the top-d eigenpairs; eigenvalues <= floor are
/// dropped rather than inverted.
SymMatrix rank_pinv(const SymMatrix& a, std::size_t d, double floor);

/// Default eigenvalue floor: 1e-10 * lambda_max. Gram matrices here are
/// numerically rank-deficient, so pseudo-inversion needs it.
double default_eigen_floor(double lambda_max);

/// Largest eigenvalue of a PSD matrix by power iteration with deterministic
/// start. The Rayleigh quotient is non-decreasing on PSD input, so this
/// always settles; intended for spectral-ratio diagnostics.
double largest_eigenvalue_psd(const SymMatrix& a);

Matrix matmul(const Matrix& a, const Matrix& b);
std::vector<double> matvec(const Matrix& a, std::span<const double> x);
Matrix transpose(const Matrix& a);

/// a * b with both sides the same symmetric matrix; result is exactly
/// symmetric bit-for-bit, returned as SymMatrix.
SymMatrix sym_square(const SymMatrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace kjl
