#pragma once

#include <cstdint>
#include <string>

#include "kjl/kernel.hpp"
#include "kjl/sketch.hpp"

namespace kjl {

/// How KPCA coordinates are produced.
///  - unnormalized: eigenvectors used as-is and test points mapped through
///    raw kernel columns (the cheap variant the benchmark compares against).
///  - unit_norm: eigenvectors scaled by 1/sqrt(eigenvalue) and test columns
///    centered, i.e. textbook KPCA coordinates.
enum class KpcaMode { unnormalized, unit_norm };

struct KpcaProjector {
    Matrix subsample;  // n x D
    KernelSpec spec;
    GramMatrix centered_gram;        // K_bar with centering statistics
    Matrix alphas;                   // d x n; row j is the (possibly scaled) eigenvector j
    std::vector<double> eigenvalues; // kept top-d of K_bar, all > floor
    KpcaMode mode = KpcaMode::unnormalized;
    int d = 0;
};

struct NystromProjector {
    Matrix subsample;  // n x D
    KernelSpec spec;
    Matrix map;                      // d x n, Lambda_d^{-1/2} U_d^T
    std::vector<double> eigenvalues; // kept top-d of uncentered K, all > floor
    int d = 0;
};

KpcaProjector kpca_fit(const Matrix& pts, const KernelSpec& spec, int d, KpcaMode mode);
std::vector<double> kpca_transform(const KpcaProjector& p, std::span<const double> x);
Embedding kpca_transform_batch(const KpcaProjector& p, const Matrix& pts);

NystromProjector nystrom_fit(const Matrix& pts, const KernelSpec& spec, int d);
std::vector<double> nystrom_transform(const NystromProjector& p, std::span<const double> x);
Embedding nystrom_transform_batch(const NystromProjector& p, const Matrix& pts);

void save_projector(const KpcaProjector& p, const std::string& path);
void save_projector(const NystromProjector& p, const std::string& path);
KpcaProjector load_kpca_projector(const std::string& path);
NystromProjector load_nystrom_projector(const std::string& path);

/// Method tag stored in a projector file, without loading the payload.
Method peek_projector_method(const std::string& path);

}  // namespace kjl
