#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "kjl/sketch.hpp"
#include "kjl/stats.hpp"

namespace kjl {

/// Large-sample plug-in ground truth for the weighted inner products the
/// sketch preserves. Holds the reference Gram matrix C and its square so a
/// query costs one matvec.
struct ReferenceOracle {
    Matrix ref_pts;  // m x D
    KernelSpec spec;
    GramMatrix gram;     // uncentered C
    SymMatrix gram_sq;   // C^2, cached

    std::size_t m() const { return ref_pts.rows(); }
};

ReferenceOracle make_oracle(Matrix ref_pts, const KernelSpec& spec);

/// Ground-truth stand-in for the cubed-covariance inner product between the
/// feature functions of x and y: c_x^T C^2 c_y / m^3.
double oracle_inner(const ReferenceOracle& o, std::span<const double> x,
                    std::span<const double> y);

/// The quantity the sketch realizes for the same pair; alias of sketch_inner
/// under the name the experiments use.
inline double empirical_inner(const SketchProjector& p, std::span<const double> x,
                              std::span<const double> y) {
    return sketch_inner(p, x, y);
}

/// tr(K) / lambda_max(K): plug-in effective dimension of the covariance
/// operator (its nonzero spectrum is spec(K)/n, so the ratio is the same).
double effective_dimension(const GramMatrix& g);

/// tr(K^3) / lambda_max(K)^3, the cubed-operator counterpart.
double effective_dimension_cubed(const GramMatrix& g);

enum class GridAxis { n, d };

struct ConvergenceReport {
    GridAxis axis = GridAxis::n;
    std::vector<int> grid;
    std::vector<double> errors;   // mean over repetitions per grid value
    std::vector<double> rep_std;  // std over repetitions per grid value
    Matrix rep_errors;            // grid.size() x reps
    double slope = 0.0;           // log-log least squares of errors vs grid
    double intercept = 0.0;
    bool slope_defined = false;
};

/// Draws probe points for the experiments; must honor the rng it is given.
using ProbeSource = std::function<Matrix(int count, SeededRng& rng)>;

/// Convergence-rate experiment: for each grid value, over `reps` independent
/// (subsample, sketch) draws and `probes` random point pairs, records the
/// worst probe error |empirical_inner - oracle_inner| and fits a log-log
/// slope. Subsamples come from the oracle's reference sample, so axis d with
/// fixed n = m exercises the pure sketch-dimension rate.
ConvergenceReport rate_experiment(const ProbeSource& probe_source, const ReferenceOracle& oracle,
                                  GridAxis axis, const std::vector<int>& grid, int fixed_other,
                                  int reps, int probes, std::uint64_t seed);

struct VarianceConvergenceReport {
    ConvergenceReport gap;  // |exact conditional variance - limit target| vs n
    double target = 0.0;
    std::vector<double> exact_mean;  // mean over reps per grid value
    std::vector<double> mc_mean;     // Monte Carlo estimate, if mc_draws > 0
    std::vector<double> mc_max_z;    // worst |mc - exact| in variance-estimator SEs
    int mc_draws = 0;
};

/// Convergence of the projected-coordinate variance: the exact conditional
/// variance of <alpha, embedded f> is ||alpha||^2 k_f^T K^2 k_f / (n^3 d);
/// compares it against the oracle-side limit and (optionally) against a
/// Monte Carlo estimate over fresh sketches.
VarianceConvergenceReport variance_convergence(const ReferenceOracle& oracle,
                                               std::span<const double> f_point,
                                               std::span<const double> alpha,
                                               const std::vector<int>& n_grid, int reps,
                                               std::uint64_t seed, int mc_draws = 0);

struct DistributionCheckReport {
    double ks_statistic = 0.0;
    double ks_p_value = 1.0;
    bool ks_pass = false;
    double sample_variance = 0.0;
    double target_variance = 0.0;
    double variance_z = 0.0;  // |sample - target| in SEs of the variance estimator
    bool variance_pass = false;
    int draws = 0;
    double alpha = 0.01;
};

/// Conditional-law check: over `draws` fresh sketches on a fixed subsample,
/// coordinate 1 of the embedded point is exactly N(0, k_x^T K^2 k_x/(n^3 d));
/// runs a KS test against that normal plus a variance comparison.
DistributionCheckReport distribution_check(const Matrix& subsample_pts, const KernelSpec& spec,
                                           int d, std::span<const double> x, int draws,
                                           std::uint64_t seed, double alpha = 0.01);

/// CSV with columns (axis, value, rep, error) and a trailing summary row
/// carrying the fitted slope and intercept.
void write_report_csv(const ConvergenceReport& report, const std::string& path);

}  // namespace kjl
