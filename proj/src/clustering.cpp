#include "kjl/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kjl {

Partition Partition::from_labels(std::vector<int> labels, int k) {
    if (labels.empty()) throw EmptyData("Partition: no points");
    if (k < 1) throw InvalidK("Partition: k must be >= 1");
    for (int v : labels)
        if (v < 0 || v >= k) throw InvalidK("Partition: label outside [0, k)");
    return Partition{std::move(labels), k};
}

namespace {

struct LloydRun {
    std::vector<int> labels;
    Matrix centers;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;
};

int nearest_center(const Matrix& centers, std::span<const double> x) {
    int best = 0;
    double best_dist = squared_distance(centers.row(0), x);
    for (std::size_t c = 1; c < centers.rows(); ++c) {
        const double dist = squared_distance(centers.row(c), x);
        if (dist < best_dist) {  // strict: ties keep the lowest index
            best_dist = dist;
            best = static_cast<int>(c);
        }
    }
    return best;
}

Matrix kmeanspp_seed(const Matrix& points, int k, SeededRng& rng) {
    const std::size_t n = points.rows();
    Matrix centers(static_cast<std::size_t>(k), points.cols());
    std::vector<double> dist_sq(n, std::numeric_limits<double>::infinity());

    std::size_t first = static_cast<std::size_t>(rng.next_below(n));
    std::copy(points.row(first).begin(), points.row(first).end(), centers.row(0).begin());

    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dist_sq[i] = std::min(dist_sq[i],
                                  squared_distance(points.row(i), centers.row(c - 1)));
            total += dist_sq[i];
        }
        std::size_t pick;
        if (total > 0.0) {
            const double target = rng.next_uniform() * total;
            double cum = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                cum += dist_sq[i];
                if (cum > target) {
                    pick = i;
                    break;
                }
            }
        } else {
            // all points coincide with existing centers
            pick = static_cast<std::size_t>(rng.next_below(n));
        }
        std::copy(points.row(pick).begin(), points.row(pick).end(),
                  centers.row(static_cast<std::size_t>(c)).begin());
    }
    return centers;
}

double assignment_objective(const Matrix& points, const Matrix& centers,
                            const std::vector<int>& labels) {
    double obj = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i)
        obj += squared_distance(points.row(i), centers.row(static_cast<std::size_t>(labels[i])));
    return obj;
}

LloydRun lloyd(const Matrix& points, int k, SeededRng rng, int max_iter) {
    const std::size_t n = points.rows();
    const std::size_t dim = points.cols();

    LloydRun run;
    run.centers = kmeanspp_seed(points, k, rng);
    run.labels.assign(n, -1);

    for (int iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const int a = nearest_center(run.centers, points.row(i));
            if (a != run.labels[i]) {
                run.labels[i] = a;
                changed = true;
            }
        }
        run.iterations = iter + 1;

        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
        Matrix sums(static_cast<std::size_t>(k), dim);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(run.labels[i]);
            ++counts[c];
            for (std::size_t j = 0; j < dim; ++j) sums(c, j) += points(i, j);
        }
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (counts[c] == 0) continue;
            for (std::size_t j = 0; j < dim; ++j)
                run.centers(c, j) = sums(c, j) / static_cast<double>(counts[c]);
        }

        // empty-cluster repair: steal the point farthest from its center
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (counts[c] != 0) continue;
            std::size_t farthest = 0;
            double worst = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto ci = static_cast<std::size_t>(run.labels[i]);
                if (counts[ci] <= 1) continue;  // keep donors non-empty
                const double dist = squared_distance(points.row(i), run.centers.row(ci));
                if (dist > worst) {
                    worst = dist;
                    farthest = i;
                }
            }
            --counts[static_cast<std::size_t>(run.labels[farthest])];
            run.labels[farthest] = static_cast<int>(c);
            counts[c] = 1;
            std::copy(points.row(farthest).begin(), points.row(farthest).end(),
                      run.centers.row(c).begin());
            changed = true;
        }

        run.trace.push_back(assignment_objective(points, run.centers, run.labels));
        if (!changed) {
            run.converged = true;
            break;
        }
    }
    run.objective = assignment_objective(points, run.centers, run.labels);
    return run;
}

}  // namespace

KmeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iter, int restarts) {
    const std::size_t n = points.rows();
    if (n == 0) throw EmptyData("kmeans: no points");
    if (k < 1 || static_cast<std::size_t>(k) > n) throw InvalidK("kmeans: need 1 <= k <= N");
    if (max_iter < 1) throw InvalidSpec("kmeans: max_iter must be >= 1");
    if (restarts < 1) throw InvalidSpec("kmeans: restarts must be >= 1");

    const SeededRng base(seed);
    LloydRun best;
    bool have_best = false;
    for (int r = 0; r < restarts; ++r) {
        LloydRun run = lloyd(points, k, base.derive2(0x6b6d, static_cast<std::uint64_t>(r)),
                             max_iter);
        if (!have_best || run.objective < best.objective) {
            best = std::move(run);
            have_best = true;
        }
    }

    KmeansResult out;
    out.partition = Partition{std::move(best.labels), k};
    out.centers = std::move(best.centers);
    out.objective = best.objective;
    out.iterations = best.iterations;
    out.converged = best.converged;
    out.objective_trace = std::move(best.trace);
    return out;
}

double rand_index(const Partition& a, const Partition& b) {
    if (a.labels.size() != b.labels.size()) throw ShapeError("rand_index: length mismatch");
    const std::size_t n = a.labels.size();
    if (n < 2) return 1.0;  // no pairs to disagree on

    const auto ka = static_cast<std::size_t>(a.k);
    const auto kb = static_cast<std::size_t>(b.k);
    std::vector<long long> joint(ka * kb, 0);
    std::vector<long long> count_a(ka, 0), count_b(kb, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto la = static_cast<std::size_t>(a.labels[i]);
        const auto lb = static_cast<std::size_t>(b.labels[i]);
        ++joint[la * kb + lb];
        ++count_a[la];
        ++count_b[lb];
    }

    auto pairs = [](long long m) { return m * (m - 1) / 2; };
    long long together_both = 0;
    for (long long m : joint) together_both += pairs(m);
    long long together_a = 0;
    for (long long m : count_a) together_a += pairs(m);
    long long together_b = 0;
    for (long long m : count_b) together_b += pairs(m);

    const long long total = pairs(static_cast<long long>(n));
    const long long agreements = total + 2 * together_both - together_a - together_b;
    return static_cast<double>(agreements) / static_cast<double>(total);
}

}  // namespace kjl
