#pragma once

#include <cstdint>
#include <vector>

#include "kjl/linalg.hpp"
#include "kjl/rng.hpp"

namespace kjl {

/// Cluster assignment over N points; labels live in [0, k).
struct Partition {
    std::vector<int> labels;
    int k = 0;

    static Partition from_labels(std::vector<int> labels, int k);
};

struct KmeansResult {
    Partition partition;
    Matrix centers;  // k x d
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;  // per Lloyd iteration of the winning run
};

/// k-means++ seeding followed by Lloyd iterations; returns the best of
/// `restarts` runs by objective. Ties in assignment break toward the lowest
/// center index and an emptied cluster is re-seeded with the point farthest
/// from its center, so a fixed (seed, data) pair is bitwise reproducible.
KmeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iter = 300,
                    int restarts = 10);

/// Fraction of point pairs on which the two partitions agree (co-clustered in
/// both or separated in both). Pair counting through a contingency table,
/// O(N + k_a * k_b).
double rand_index(const Partition& a, const Partition& b);

}  // namespace kjl
