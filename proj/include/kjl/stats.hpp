#pragma once

#include <span>
#include <vector>

namespace kjl {

double mean(std::span<const double> xs);
/// Population variance (divide by N).
double variance(std::span<const double> xs);
/// Sample variance (divide by N-1).
double sample_variance(std::span<const double> xs);

double normal_cdf(double x, double mu = 0.0, double sigma = 1.0);

/// P(sup_t |B(t)| > lambda) for the Brownian bridge -- the asymptotic null
/// distribution of sqrt(N) * D_N in the Kolmogorov-Smirnov test.
double kolmogorov_tail(double lambda);

struct KsResult {
    double statistic = 0.0;  // D_N
    double p_value = 1.0;    // asymptotic
};

/// One-sample KS test of xs against N(mu, sigma^2).
KsResult ks_test_normal(std::span<const double> xs, double mu, double sigma);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    bool defined = false;
};

/// Least-squares line through (log xs, log ys); undefined when fewer than two
/// points or any coordinate is non-positive.
LineFit loglog_fit(std::span<const double> xs, std::span<const double> ys);

}  // namespace kjl
