#include "kjl/theory.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>

#include "kjl/data.hpp"

namespace kjl {

ReferenceOracle make_oracle(Matrix ref_pts, const KernelSpec& spec) {
    if (ref_pts.rows() == 0) throw EmptyData("make_oracle: no reference points");
    ReferenceOracle o;
    o.spec = spec;
    o.gram = gram(spec, ref_pts);
    o.gram_sq = sym_square(o.gram.base);
    o.ref_pts = std::move(ref_pts);
    return o;
}

namespace {

std::vector<double> kernel_column(const KernelSpec& spec, const Matrix& pts,
                                  std::span<const double> x) {
    std::vector<double> kx(pts.rows());
    for (std::size_t i = 0; i < pts.rows(); ++i) kx[i] = kernel_eval(spec, pts.row(i), x);
    return kx;
}

}  // namespace

double oracle_inner(const ReferenceOracle& o, std::span<const double> x,
                    std::span<const double> y) {
    if (x.size() != o.ref_pts.cols() || y.size() != o.ref_pts.cols())
        throw ShapeError("oracle_inner: point dimension mismatch");
    const std::vector<double> cx = kernel_column(o.spec, o.ref_pts, x);
    const std::vector<double> cy = kernel_column(o.spec, o.ref_pts, y);
    const std::vector<double> w = matvec(o.gram_sq.full(), cy);
    const double m = static_cast<double>(o.m());
    return dot(cx, w) / (m * m * m);
}

double effective_dimension(const GramMatrix& g) {
    if (g.centered) throw StateError("effective_dimension: expects an uncentered Gram");
    const double lambda = largest_eigenvalue_psd(g.base);  // throws DegenerateData on zero
    return g.base.trace() / lambda;
}

double effective_dimension_cubed(const GramMatrix& g) {
    if (g.centered) throw StateError("effective_dimension_cubed: expects an uncentered Gram");
    const double lambda = largest_eigenvalue_psd(g.base);
    const SymMatrix sq = sym_square(g.base);
    double trace_cubed = 0.0;
    for (std::size_t i = 0; i < g.order(); ++i)
        trace_cubed += dot(g.base.full().row(i), sq.full().row(i));
    return trace_cubed / (lambda * lambda * lambda);
}

namespace {

void finalize_report(ConvergenceReport& report, int reps) {
    const std::size_t g = report.grid.size();
    report.errors.resize(g);
    report.rep_std.resize(g);
    for (std::size_t i = 0; i < g; ++i) {
        report.errors[i] = mean(report.rep_errors.row(i));
        report.rep_std[i] = reps > 1 ? std::sqrt(variance(report.rep_errors.row(i))) : 0.0;
    }
    std::vector<double> xs(report.grid.begin(), report.grid.end());
    const LineFit fit = loglog_fit(xs, report.errors);
    report.slope = fit.slope;
    report.intercept = fit.intercept;
    report.slope_defined = fit.defined;
}

// Distinct stream tags for the independent randomness sources.
constexpr std::uint64_t kProbeTag = 0x70726f62;
constexpr std::uint64_t kSubsampleTag = 0x73756273;
constexpr std::uint64_t kSketchTag = 0x736b6574;

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t a,
                           std::uint64_t b = 0) {
    SeededRng rng = SeededRng(seed).derive2(tag ^ a, b);
    return rng.next_u64();
}

}  // namespace

ConvergenceReport rate_experiment(const ProbeSource& probe_source, const ReferenceOracle& oracle,
                                  GridAxis axis, const std::vector<int>& grid, int fixed_other,
                                  int reps, int probes, std::uint64_t seed) {
    if (grid.empty()) throw InvalidSpec("rate_experiment: empty grid");
    if (!std::is_sorted(grid.begin(), grid.end()) ||
        std::adjacent_find(grid.begin(), grid.end()) != grid.end())
        throw InvalidSpec("rate_experiment: grid must be strictly increasing");
    if (reps < 1 || probes < 1) throw InvalidSpec("rate_experiment: reps and probes must be >= 1");
    const std::size_t m = oracle.m();
    if (axis == GridAxis::n) {
        if (static_cast<std::size_t>(grid.back()) > m / 10)
            throw OracleTooSmall("rate_experiment: largest n exceeds m/10");
        if (fixed_other < 1) throw InvalidRank("rate_experiment: fixed d must be >= 1");
    } else {
        if (static_cast<std::size_t>(fixed_other) > m)
            throw OracleTooSmall("rate_experiment: fixed n exceeds reference size");
        if (static_cast<std::size_t>(fixed_other) > m / 10 &&
            static_cast<std::size_t>(fixed_other) != m)
            std::fprintf(stderr,
                         "rate_experiment: warning: fixed n=%d against m=%zu reference points "
                         "is outside the plug-in regime\n",
                         fixed_other, m);
    }

    ConvergenceReport report;
    report.axis = axis;
    report.grid = grid;
    report.rep_errors = Matrix(grid.size(), static_cast<std::size_t>(reps));

    for (int rep = 0; rep < reps; ++rep) {
        SeededRng probe_rng(derived_seed(seed, kProbeTag, static_cast<std::uint64_t>(rep)));
        const Matrix probe_pts = probe_source(2 * probes, probe_rng);
        if (probe_pts.rows() != static_cast<std::size_t>(2 * probes))
            throw ShapeError("rate_experiment: probe source returned wrong count");

        std::vector<double> truth(static_cast<std::size_t>(probes));
        for (int p = 0; p < probes; ++p)
            truth[static_cast<std::size_t>(p)] =
                oracle_inner(oracle, probe_pts.row(static_cast<std::size_t>(2 * p)),
                             probe_pts.row(static_cast<std::size_t>(2 * p + 1)));

        for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            const int n = axis == GridAxis::n ? grid[gi] : fixed_other;
            const int d = axis == GridAxis::d ? grid[gi] : fixed_other;

            SketchProjector proj;
            const std::uint64_t sketch_seed =
                derived_seed(seed, kSketchTag, static_cast<std::uint64_t>(rep),
                             static_cast<std::uint64_t>(gi));
            if (static_cast<std::size_t>(n) == m) {
                proj = fit_with_gram(oracle.ref_pts, oracle.spec, oracle.gram, d, sketch_seed);
            } else {
                const std::uint64_t sub_seed =
                    derived_seed(seed, kSubsampleTag, static_cast<std::uint64_t>(rep),
                                 static_cast<std::uint64_t>(gi));
                const Subsample sub = subsample(oracle.ref_pts, static_cast<std::size_t>(n),
                                                sub_seed);
                proj = fit(sub.points, oracle.spec, d, sketch_seed, /*centered=*/false);
            }

            double worst = 0.0;
            for (int p = 0; p < probes; ++p) {
                const double emp =
                    empirical_inner(proj, probe_pts.row(static_cast<std::size_t>(2 * p)),
                                    probe_pts.row(static_cast<std::size_t>(2 * p + 1)));
                worst = std::max(worst, std::abs(emp - truth[static_cast<std::size_t>(p)]));
            }
            report.rep_errors(gi, static_cast<std::size_t>(rep)) = worst;
        }
    }
    finalize_report(report, reps);
    return report;
}

VarianceConvergenceReport variance_convergence(const ReferenceOracle& oracle,
                                               std::span<const double> f_point,
                                               std::span<const double> alpha,
                                               const std::vector<int>& n_grid, int reps,
                                               std::uint64_t seed, int mc_draws) {
    if (n_grid.empty()) throw InvalidSpec("variance_convergence: empty grid");
    if (reps < 1) throw InvalidSpec("variance_convergence: reps must be >= 1");
    const std::size_t m = oracle.m();
    if (static_cast<std::size_t>(n_grid.back()) > m / 10)
        throw OracleTooSmall("variance_convergence: largest n exceeds m/10");
    const int d = static_cast<int>(alpha.size());
    if (d < 1) throw InvalidRank("variance_convergence: alpha must be non-empty");

    const double alpha_sq = dot(alpha, alpha);
    VarianceConvergenceReport out;
    out.mc_draws = mc_draws;
    out.target = alpha_sq * oracle_inner(oracle, f_point, f_point) / static_cast<double>(d);

    out.gap.axis = GridAxis::n;
    out.gap.grid = n_grid;
    out.gap.rep_errors = Matrix(n_grid.size(), static_cast<std::size_t>(reps));
    Matrix exact_all(n_grid.size(), static_cast<std::size_t>(reps));
    Matrix mc_all(n_grid.size(), static_cast<std::size_t>(std::max(mc_draws > 0 ? reps : 0, 0)));
    out.mc_max_z.assign(n_grid.size(), 0.0);

    for (int rep = 0; rep < reps; ++rep) {
        for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
            const auto n = static_cast<std::size_t>(n_grid[gi]);
            const std::uint64_t sub_seed =
                derived_seed(seed, kSubsampleTag, static_cast<std::uint64_t>(rep),
                             static_cast<std::uint64_t>(gi));
            const Subsample sub = subsample(oracle.ref_pts, n, sub_seed);
            const GramMatrix g = gram(oracle.spec, sub.points);

            const std::vector<double> kf = kernel_column(oracle.spec, sub.points, f_point);
            const std::vector<double> u = matvec(g.base.full(), kf);
            const double nn = static_cast<double>(n);
            const double exact = alpha_sq * dot(u, u) / (nn * nn * nn * static_cast<double>(d));
            exact_all(gi, static_cast<std::uint64_t>(rep)) = exact;
            out.gap.rep_errors(gi, static_cast<std::size_t>(rep)) = std::abs(exact - out.target);

            if (mc_draws > 0) {
                std::vector<double> vals(static_cast<std::size_t>(mc_draws));
                for (int s = 0; s < mc_draws; ++s) {
                    const std::uint64_t sketch_seed =
                        derived_seed(seed, kSketchTag,
                                     static_cast<std::uint64_t>(rep * 1000003 + s),
                                     static_cast<std::uint64_t>(gi));
                    const SketchProjector proj =
                        fit_with_gram(sub.points, oracle.spec, g, d, sketch_seed);
                    vals[static_cast<std::size_t>(s)] = dot(alpha, transform(proj, f_point));
                }
                const double mc = sample_variance(vals);
                mc_all(gi, static_cast<std::size_t>(rep)) = mc;
                const double se = exact * std::sqrt(2.0 / (mc_draws - 1));
                const double z = se > 0.0 ? std::abs(mc - exact) / se : (mc == 0.0 ? 0.0 : HUGE_VAL);
                out.mc_max_z[gi] = std::max(out.mc_max_z[gi], z);
            }
        }
    }

    finalize_report(out.gap, reps);
    out.exact_mean.resize(n_grid.size());
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi)
        out.exact_mean[gi] = mean(exact_all.row(gi));
    if (mc_draws > 0) {
        out.mc_mean.resize(n_grid.size());
        for (std::size_t gi = 0; gi < n_grid.size(); ++gi)
            out.mc_mean[gi] = mean(mc_all.row(gi));
    }
    return out;
}

DistributionCheckReport distribution_check(const Matrix& subsample_pts, const KernelSpec& spec,
                                           int d, std::span<const double> x, int draws,
                                           std::uint64_t seed, double alpha) {
    if (draws < 100) throw InsufficientDraws("distribution_check: need at least 100 draws");
    if (d < 1) throw InvalidRank("distribution_check: d must be >= 1");
    const std::size_t n = subsample_pts.rows();
    if (n == 0) throw EmptyData("distribution_check: empty subsample");

    const GramMatrix g = gram(spec, subsample_pts);
    const std::vector<double> kx = kernel_column(spec, subsample_pts, x);
    const std::vector<double> u = matvec(g.base.full(), kx);
    const double nn = static_cast<double>(n);
    const double target = dot(u, u) / (nn * nn * nn * static_cast<double>(d));
    if (target < DBL_MIN)
        throw DegenerateData("distribution_check: kernel column is numerically zero");

    std::vector<double> vals(static_cast<std::size_t>(draws));
    for (int s = 0; s < draws; ++s) {
        const std::uint64_t sketch_seed =
            derived_seed(seed, kSketchTag, static_cast<std::uint64_t>(s));
        const SketchProjector proj = fit_with_gram(subsample_pts, spec, g, d, sketch_seed);
        vals[static_cast<std::size_t>(s)] = transform(proj, x)[0];
    }

    DistributionCheckReport out;
    out.draws = draws;
    out.alpha = alpha;
    out.target_variance = target;
    const KsResult ks = ks_test_normal(vals, 0.0, std::sqrt(target));
    out.ks_statistic = ks.statistic;
    out.ks_p_value = ks.p_value;
    out.ks_pass = ks.p_value >= alpha;
    out.sample_variance = sample_variance(vals);
    const double se = target * std::sqrt(2.0 / (draws - 1));
    out.variance_z = std::abs(out.sample_variance - target) / se;
    out.variance_pass = out.variance_z <= 5.0;
    return out;
}

void write_report_csv(const ConvergenceReport& report, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("write_report_csv: cannot open " + path + " for writing");
    std::fprintf(f, "axis,value,rep,error\n");
    const char* axis = report.axis == GridAxis::n ? "n" : "d";
    for (std::size_t gi = 0; gi < report.grid.size(); ++gi)
        for (std::size_t rep = 0; rep < report.rep_errors.cols(); ++rep)
            std::fprintf(f, "%s,%d,%zu,%.17g\n", axis, report.grid[gi], rep,
                         report.rep_errors(gi, rep));
    if (report.slope_defined)
        std::fprintf(f, "slope,%.17g,intercept,%.17g\n", report.slope, report.intercept);
    else
        std::fprintf(f, "slope,nan,intercept,nan\n");
    std::fclose(f);
}

}  // namespace kjl
