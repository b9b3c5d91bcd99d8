#pragma once
/*
Weighted K-means with Maximin (farthest-first) initialization.

Seeding: the first center is the estimate of arm 1 (fixed for reproducible
trials); each further center is the estimate of the arm with the greatest
Euclidean distance to its nearest already-chosen center, ties broken by the
lowest arm index. Lloyd iterations then alternate nearest-center assignment
(ties toward the lowest cluster index) with center updates to the
weight-weighted mean of the assigned estimates, until the partition repeats
or max_iters is hit.

When every estimate is within a quarter of the minimum center gap of its true
mean, the output partition is equivalent to the truth and each output center
is at most that estimation error away from its true counterpart.

A cluster that loses all arms during an iteration is repaired by handing it
the arm farthest from its own current center among clusters of size >= 2, so
the result always has exactly K nonempty clusters.
*/
#include <span>
#include <vector>

#include "boc/model.hpp"

namespace boc {

struct ClusteringResult {
    Partition partition;
    std::vector<Vec> centers;
    int iterations = 0;
    bool converged = false;
};

struct MaximinSeed {
    std::vector<Vec> centers;
    std::vector<int> arms;  // 0-based indices of the chosen arms
};

MaximinSeed maximin_init(const std::vector<Vec>& estimates, int num_clusters);

// weights must be strictly positive and M > K. With a warm start the Maximin
// seeding is skipped and Lloyd starts from the given partition.
ClusteringResult weighted_kmeans(const std::vector<Vec>& estimates, std::span<const double> weights,
                                 int num_clusters, const Partition* warm_start = nullptr,
                                 int max_iters = 100);

}  // namespace boc
