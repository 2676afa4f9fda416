#include "kjl/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "kjl/baselines.hpp"
#include "kjl/clustering.hpp"
#include "kjl/stats.hpp"
#include "kjl/theory.hpp"

namespace kjl {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Stream tags for the independent randomness sources of a run.
constexpr std::uint64_t kSubsampleTag = 0x737562;
constexpr std::uint64_t kFitTag = 0x666974;
constexpr std::uint64_t kKmeansTag = 0x6b6d6e;
constexpr std::uint64_t kReferenceTag = 0x726566;
constexpr std::uint64_t kBandwidthTag = 0x6277;
constexpr std::uint64_t kProbeTag = 0x70726f;

int resolve_workers(int configured) {
    if (configured > 0) return configured;
    if (const char* env = std::getenv("KJL_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> guard(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

SynthSpec synth_spec_from(const RunConfig& cfg) {
    SynthSpec spec;
    spec.n_points = cfg.synth_n;
    spec.seed = cfg.seed;
    if (cfg.synth == "cluster_in_cluster") {
        spec.shape = SynthShape::cluster_in_cluster;
    } else if (cfg.synth == "crescent_full_moon") {
        spec.shape = SynthShape::crescent_full_moon;
    } else if (cfg.synth == "gaussian_mixture") {
        spec.shape = SynthShape::gaussian_mixture;
        spec.means = {{-1.5, 0.0}, {1.5, 0.0}};
        spec.weights = {0.5, 0.5};
        spec.sigma = 1.0;
    } else {
        throw InvalidSpec("unknown synthetic shape '" + cfg.synth + "'");
    }
    return spec;
}

// Field count of the first data line, for resolving negative label indices.
std::size_t peek_csv_width(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    int skip = has_header ? 1 : 0;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (skip-- > 0) continue;
        const char delim = std::count(line.begin(), line.end(), ';') >
                                   std::count(line.begin(), line.end(), ',')
                               ? ';'
                               : ',';
        return static_cast<std::size_t>(std::count(line.begin(), line.end(), delim)) + 1;
    }
    throw EmptyData("file has no data rows: " + path);
}

struct FittedMethod {
    Matrix embedded;
    double fit_seconds = 0.0;
    double transform_seconds = 0.0;
};

FittedMethod fit_and_map(const std::string& method, const Matrix& sub_points,
                         const KernelSpec& spec, int d, std::uint64_t fit_seed,
                         const RunConfig& cfg, const Matrix& all_points) {
    FittedMethod out;
    const auto t0 = Clock::now();
    if (method == "kjl") {
        const SketchProjector p = fit(sub_points, spec, d, fit_seed, cfg.center, cfg.center_oos);
        out.fit_seconds = seconds_since(t0);
        const auto t1 = Clock::now();
        out.embedded = transform_batch(p, all_points).points;
        out.transform_seconds = seconds_since(t1);
    } else if (method == "kpca") {
        const KpcaMode mode =
            cfg.kpca_mode == "unit_norm" ? KpcaMode::unit_norm : KpcaMode::unnormalized;
        const KpcaProjector p = kpca_fit(sub_points, spec, d, mode);
        out.fit_seconds = seconds_since(t0);
        const auto t1 = Clock::now();
        out.embedded = kpca_transform_batch(p, all_points).points;
        out.transform_seconds = seconds_since(t1);
    } else if (method == "nystrom") {
        const NystromProjector p = nystrom_fit(sub_points, spec, d);
        out.fit_seconds = seconds_since(t0);
        const auto t1 = Clock::now();
        out.embedded = nystrom_transform_batch(p, all_points).points;
        out.transform_seconds = seconds_since(t1);
    } else {
        throw InvalidSpec("unknown method '" + method + "'");
    }
    return out;
}

std::vector<std::string> method_list(const std::string& spec) {
    if (spec == "all") return {"kjl", "kpca", "nystrom", "raw"};
    std::vector<std::string> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (out.empty()) throw InvalidSpec("no methods given");
    return out;
}

void write_bench_csv(const BenchOutput& bench, const std::string& records_path,
                     const std::string& summary_path) {
    std::FILE* f = std::fopen(records_path.c_str(), "w");
    if (!f) throw IoError("cannot open " + records_path + " for writing");
    std::fprintf(f, "method,rep,seed,n,d,k,rand_index,preprocess_seconds\n");
    for (const BenchRecord& r : bench.records)
        std::fprintf(f, "%s,%d,%llu,%d,%d,%d,%.17g,%.6f\n", r.method.c_str(), r.rep,
                     static_cast<unsigned long long>(r.seed), r.n, r.d, r.k, r.rand_index,
                     r.preprocess_seconds);
    std::fclose(f);

    f = std::fopen(summary_path.c_str(), "w");
    if (!f) throw IoError("cannot open " + summary_path + " for writing");
    std::fprintf(f, "method,reps,mean_ri,std_ri,single_rep,mean_preprocess_seconds\n");
    for (const BenchSummary& s : bench.summaries)
        std::fprintf(f, "%s,%d,%.17g,%.17g,%d,%.6f\n", s.method.c_str(), s.reps, s.mean_ri,
                     s.std_ri, s.single_rep ? 1 : 0, s.mean_preprocess_seconds);
    std::fclose(f);
}

}  // namespace

Dataset load_input(const RunConfig& cfg) {
    if (!cfg.data_path.empty() && !cfg.synth.empty())
        throw InvalidSpec("give either --data or --synth, not both");
    Dataset d;
    bool standardize_default;
    if (!cfg.data_path.empty()) {
        std::optional<LabelColumn> label;
        if (cfg.label_col) {
            long idx = *cfg.label_col;
            if (idx < 0)
                idx += static_cast<long>(peek_csv_width(cfg.data_path, cfg.has_header));
            if (idx < 0) throw InvalidSpec("label column index out of range");
            label = static_cast<std::size_t>(idx);
        }
        d = load_csv(cfg.data_path, label, cfg.has_header);
        standardize_default = true;  // UCI-style features come in wildly different scales
    } else if (!cfg.synth.empty()) {
        d = generate(synth_spec_from(cfg));
        standardize_default = false;
    } else {
        throw InvalidSpec("no input: give --data or --synth");
    }
    if (cfg.standardize_features.value_or(standardize_default)) d = standardize(d);
    return d;
}

BenchOutput run_bench(const Dataset& data, const std::vector<std::string>& methods,
                      const RunConfig& cfg) {
    if (!data.has_labels) throw InvalidSpec("bench needs labeled data for the Rand index");
    if (cfg.reps < 1) throw InvalidSpec("bench needs reps >= 1");
    const auto total = static_cast<int>(data.size());
    const int k = cfg.k > 0 ? cfg.k : data.num_classes();
    if (k < 1) throw InvalidK("bench: could not infer k");
    const int n = cfg.n > 0 ? cfg.n : paper_n(total);
    if (n > total) throw InvalidSize("bench: subsample size exceeds dataset size");
    const int d = cfg.d > 0 ? cfg.d : 10 * k;
    const Partition truth = Partition::from_labels(data.labels, data.num_classes());

    const SeededRng master(cfg.seed);
    const auto num_methods = methods.size();
    BenchOutput out;
    out.records.resize(static_cast<std::size_t>(cfg.reps) * num_methods);

    parallel_for(cfg.reps, resolve_workers(cfg.workers), [&](int rep) {
        for (std::size_t mi = 0; mi < num_methods; ++mi) {
            const std::string& method = methods[mi];
            // paired mode shares the subsample stream across methods of a rep
            const std::uint64_t method_salt = cfg.paired ? 0 : mi + 1;
            const std::uint64_t sub_seed =
                master.derive2(kSubsampleTag ^ static_cast<std::uint64_t>(rep), method_salt)
                    .next_u64();
            const std::uint64_t fit_seed =
                master.derive2(kFitTag ^ static_cast<std::uint64_t>(rep), mi).next_u64();
            const std::uint64_t km_seed =
                master.derive2(kKmeansTag ^ static_cast<std::uint64_t>(rep), mi).next_u64();

            BenchRecord rec;
            rec.method = method;
            rec.rep = rep;
            rec.seed = sub_seed;
            rec.n = n;
            rec.d = d;
            rec.k = k;

            Matrix embedded;
            if (method == "raw") {
                embedded = data.features;
                rec.preprocess_seconds = 0.0;
            } else {
                const Subsample sub = subsample(data, static_cast<std::size_t>(n), sub_seed);
                const double sigma = select_bandwidth(sub.points, cfg.percentile);
                const KernelSpec spec = KernelSpec::gaussian(sigma * sigma);
                FittedMethod fitted =
                    fit_and_map(method, sub.points, spec, d, fit_seed, cfg, data.features);
                embedded = std::move(fitted.embedded);
                rec.preprocess_seconds = fitted.fit_seconds + fitted.transform_seconds;
            }

            const KmeansResult km = kmeans(embedded, k, km_seed, cfg.max_iter, cfg.restarts);
            rec.rand_index = rand_index(km.partition, truth);
            out.records[static_cast<std::size_t>(rep) * num_methods + mi] = std::move(rec);
        }
    });

    for (std::size_t mi = 0; mi < num_methods; ++mi) {
        std::vector<double> ris, times;
        for (int rep = 0; rep < cfg.reps; ++rep) {
            const BenchRecord& r = out.records[static_cast<std::size_t>(rep) * num_methods + mi];
            ris.push_back(r.rand_index);
            times.push_back(r.preprocess_seconds);
        }
        BenchSummary s;
        s.method = methods[mi];
        s.reps = cfg.reps;
        s.mean_ri = mean(ris);
        s.single_rep = cfg.reps == 1;
        s.std_ri = s.single_rep ? 0.0 : std::sqrt(sample_variance(ris));
        s.mean_preprocess_seconds = mean(times);
        out.summaries.push_back(std::move(s));
    }
    return out;
}

int cmd_embed(const RunConfig& cfg) {
    const Dataset data = load_input(cfg);
    fs::create_directories(cfg.out_dir);
    const auto total = static_cast<int>(data.size());
    const int k = cfg.k > 0 ? cfg.k : std::max(data.num_classes(), 1);
    const int n = cfg.n > 0 ? cfg.n : paper_n(total);
    const int d = cfg.d > 0 ? cfg.d : 10 * k;

    double fit_seconds = 0.0;
    double transform_seconds = 0.0;
    double bandwidth_sq = 0.0;
    Matrix embedded;
    if (cfg.method == "raw") {
        embedded = data.features;
    } else {
        if (n > total) throw InvalidSize("embed: subsample size exceeds dataset size");
        const std::uint64_t sub_seed =
            SeededRng(cfg.seed).derive(kSubsampleTag).next_u64();
        const Subsample sub = subsample(data, static_cast<std::size_t>(n), sub_seed);
        const double sigma = select_bandwidth(sub.points, cfg.percentile);
        const KernelSpec spec = KernelSpec::gaussian(sigma * sigma);
        bandwidth_sq = spec.bandwidth_sq;
        const std::uint64_t fit_seed = SeededRng(cfg.seed).derive(kFitTag).next_u64();
        const FittedMethod fitted =
            fit_and_map(cfg.method, sub.points, spec, d, fit_seed, cfg, data.features);
        embedded = fitted.embedded;
        fit_seconds = fitted.fit_seconds;
        transform_seconds = fitted.transform_seconds;
    }

    const std::string csv = (fs::path(cfg.out_dir) / "embedding.csv").string();
    save_matrix_csv(embedded, csv);

    const std::string meta = (fs::path(cfg.out_dir) / "embedding_meta.txt").string();
    std::FILE* f = std::fopen(meta.c_str(), "w");
    if (!f) throw IoError("cannot open " + meta + " for writing");
    std::fprintf(f, "method=%s\n", cfg.method.c_str());
    std::fprintf(f, "N=%zu\nD=%zu\n", data.size(), data.dim());
    std::fprintf(f, "n=%d\nd=%d\nseed=%llu\n", n, d,
                 static_cast<unsigned long long>(cfg.seed));
    std::fprintf(f, "bandwidth_sq=%.17g\npercentile=%g\n", bandwidth_sq, cfg.percentile);
    std::fprintf(f, "centered=%d\ncenter_oos=%d\n", cfg.center ? 1 : 0, cfg.center_oos ? 1 : 0);
    std::fprintf(f, "fit_seconds=%.6f\ntransform_seconds=%.6f\n", fit_seconds,
                 transform_seconds);
    std::fclose(f);

    std::printf("embed: wrote %zux%zu -> %s\n", embedded.rows(), embedded.cols(), csv.c_str());
    return 0;
}

int cmd_bench(const RunConfig& cfg) {
    const Dataset data = load_input(cfg);
    fs::create_directories(cfg.out_dir);
    const BenchOutput bench = run_bench(data, method_list(cfg.method), cfg);
    write_bench_csv(bench, (fs::path(cfg.out_dir) / "bench.csv").string(),
                    (fs::path(cfg.out_dir) / "bench_summary.csv").string());
    for (const BenchSummary& s : bench.summaries)
        std::printf("bench: %-8s RI %.4f +- %.4f   preprocess %.4fs\n", s.method.c_str(),
                    s.mean_ri, s.std_ri, s.mean_preprocess_seconds);
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    if (cfg.grid.empty()) throw InvalidSpec("sweep: empty grid");
    if (cfg.axis != "n" && cfg.axis != "d") throw InvalidSpec("sweep: axis must be n or d");
    const Dataset data = load_input(cfg);
    fs::create_directories(cfg.out_dir);
    const std::vector<std::string> methods = method_list(cfg.method);

    const std::string path = (fs::path(cfg.out_dir) / "sweep.csv").string();
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("cannot open " + path + " for writing");
    std::fprintf(f, "axis,value,method,mean_ri,std_ri\n");
    for (int value : cfg.grid) {
        RunConfig point = cfg;
        if (cfg.axis == "n")
            point.n = value;
        else
            point.d = value;
        const BenchOutput bench = run_bench(data, methods, point);
        for (const BenchSummary& s : bench.summaries) {
            std::fprintf(f, "%s,%d,%s,%.17g,%.17g\n", cfg.axis.c_str(), value, s.method.c_str(),
                         s.mean_ri, s.std_ri);
            std::printf("sweep: %s=%-5d %-8s RI %.4f +- %.4f\n", cfg.axis.c_str(), value,
                        s.method.c_str(), s.mean_ri, s.std_ri);
        }
    }
    std::fclose(f);
    return 0;
}

int cmd_theory(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);

    // Reference sample and probe source share one data distribution.
    Matrix ref_pts;
    ProbeSource probe_source;
    if (!cfg.data_path.empty()) {
        const Dataset data = load_input(cfg);
        const std::size_t m =
            std::min(static_cast<std::size_t>(cfg.oracle_m), data.size());
        const std::uint64_t ref_seed = SeededRng(cfg.seed).derive(kReferenceTag).next_u64();
        ref_pts = subsample(data, m, ref_seed).points;
        const Matrix features = data.features;
        probe_source = [features](int count, SeededRng& rng) {
            return subsample(features, static_cast<std::size_t>(count), rng.next_u64()).points;
        };
    } else {
        RunConfig synth_cfg = cfg;
        if (synth_cfg.synth.empty()) synth_cfg.synth = "gaussian_mixture";
        SynthSpec spec = synth_spec_from(synth_cfg);
        spec.n_points = cfg.oracle_m;
        const std::uint64_t ref_seed = SeededRng(cfg.seed).derive(kReferenceTag).next_u64();
        spec.seed = ref_seed;
        ref_pts = generate(spec).features;
        probe_source = [spec](int count, SeededRng& rng) {
            SynthSpec fresh = spec;
            fresh.n_points = count;
            fresh.seed = rng.next_u64();
            return generate(fresh).features;
        };
    }

    SeededRng bw_rng = SeededRng(cfg.seed).derive(kBandwidthTag);
    const double sigma = select_bandwidth(ref_pts, cfg.percentile, &bw_rng);
    const KernelSpec spec = KernelSpec::gaussian(sigma * sigma);
    std::printf("theory: m=%zu bandwidth_sq=%.6g\n", ref_pts.rows(), spec.bandwidth_sq);

    const ReferenceOracle oracle = make_oracle(ref_pts, spec);

    const int n_fixed =
        cfg.theory_n_fixed > 0 ? cfg.theory_n_fixed : static_cast<int>(oracle.m());
    const ConvergenceReport rate_d =
        rate_experiment(probe_source, oracle, GridAxis::d, cfg.theory_d_grid, n_fixed,
                        cfg.theory_reps, cfg.probes, cfg.seed);
    write_report_csv(rate_d, (fs::path(cfg.out_dir) / "rate_d.csv").string());
    std::printf("theory: rate vs d slope %.3f (expected near -0.5)\n", rate_d.slope);

    const ConvergenceReport rate_n =
        rate_experiment(probe_source, oracle, GridAxis::n, cfg.theory_n_grid, cfg.theory_d_fixed,
                        cfg.theory_reps, cfg.probes, cfg.seed);
    write_report_csv(rate_n, (fs::path(cfg.out_dir) / "rate_n.csv").string());
    std::printf("theory: rate vs n slope %.3f (expected near -0.5)\n", rate_n.slope);

    SeededRng probe_rng = SeededRng(cfg.seed).derive(kProbeTag);
    const Matrix f_point = probe_source(1, probe_rng);
    std::vector<double> alpha(static_cast<std::size_t>(cfg.dist_d));
    for (double& a : alpha) a = probe_rng.next_gaussian();
    const VarianceConvergenceReport var = variance_convergence(
        oracle, f_point.row(0), alpha, cfg.theory_n_grid, cfg.theory_reps, cfg.seed,
        cfg.mc_draws);
    write_report_csv(var.gap, (fs::path(cfg.out_dir) / "variance_gap.csv").string());
    double worst_z = 0.0;
    for (double z : var.mc_max_z) worst_z = std::max(worst_z, z);
    std::printf("theory: variance gap slope %.3f, worst exact-vs-MC z %.2f\n", var.gap.slope,
                worst_z);

    const std::uint64_t dist_sub_seed =
        SeededRng(cfg.seed).derive2(kSubsampleTag, 0xd157).next_u64();
    const Subsample dist_sub =
        subsample(ref_pts, static_cast<std::size_t>(cfg.dist_subsample), dist_sub_seed);
    const Matrix x_point = probe_source(1, probe_rng);
    const DistributionCheckReport dist =
        distribution_check(dist_sub.points, spec, cfg.dist_d, x_point.row(0), cfg.dist_draws,
                           cfg.seed);
    {
        const std::string path = (fs::path(cfg.out_dir) / "distribution_check.csv").string();
        std::FILE* f = std::fopen(path.c_str(), "w");
        if (!f) throw IoError("cannot open " + path + " for writing");
        std::fprintf(f, "draws,ks_statistic,ks_p_value,ks_pass,sample_variance,target_variance,"
                        "variance_z,variance_pass\n");
        std::fprintf(f, "%d,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%d\n", dist.draws, dist.ks_statistic,
                     dist.ks_p_value, dist.ks_pass ? 1 : 0, dist.sample_variance,
                     dist.target_variance, dist.variance_z, dist.variance_pass ? 1 : 0);
        std::fclose(f);
        std::printf("theory: KS p=%.4f (%s), variance z=%.2f (%s)\n", dist.ks_p_value,
                    dist.ks_pass ? "pass" : "FAIL", dist.variance_z,
                    dist.variance_pass ? "pass" : "FAIL");
    }

    {
        const std::string path = (fs::path(cfg.out_dir) / "effective_dimension.csv").string();
        std::FILE* f = std::fopen(path.c_str(), "w");
        if (!f) throw IoError("cannot open " + path + " for writing");
        std::fprintf(f, "n,effective_dimension,effective_dimension_cubed\n");
        for (int n : cfg.theory_n_grid) {
            const std::uint64_t s =
                SeededRng(cfg.seed).derive2(kSubsampleTag, static_cast<std::uint64_t>(n))
                    .next_u64();
            const Subsample sub = subsample(ref_pts, static_cast<std::size_t>(n), s);
            const GramMatrix g = gram(spec, sub.points);
            std::fprintf(f, "%d,%.17g,%.17g\n", n, effective_dimension(g),
                         effective_dimension_cubed(g));
        }
        std::fclose(f);
    }
    return 0;
}

int cmd_synth(const RunConfig& cfg) {
    if (cfg.synth.empty()) throw InvalidSpec("synth: give a shape with --synth");
    fs::create_directories(cfg.out_dir);
    const Dataset d = generate(synth_spec_from(cfg));
    const std::string path = (fs::path(cfg.out_dir) / (d.name + ".csv")).string();
    save_csv(d, path);
    std::printf("synth: wrote %zu points (%zu dims, labels in last column) -> %s\n", d.size(),
                d.dim(), path.c_str());
    return 0;
}

}  // namespace kjl
