#pragma once
/*
Cluster-bandit instances and their equivalences.

An instance is a pair (c, U): c assigns each of the M arms a cluster label in
1..K, and U holds one d-dimensional center per cluster. Valid instances have
every cluster nonempty and K < M. Two partitions are equivalent when one is a
relabeling of the other by a permutation of 1..K; two instances are equivalent
when every arm has the same mean vector under both. Partition equivalence is
decided in O(M) by comparing canonical forms (clusters renamed in order of
first appearance).

All types are immutable after construction and the operations are pure, so
values can be shared freely across concurrent trial workers.
*/
#include <string>
#include <vector>

#include "boc/vecmath.hpp"

namespace boc {

// Cluster labels of the M arms; labels[m] is in 1..num_clusters.
struct Partition {
    std::vector<int> labels;
    int num_clusters = 0;

    int num_arms() const { return static_cast<int>(labels.size()); }
};

struct Instance {
    Partition partition;
    std::vector<Vec> centers;  // one center per cluster, each of size dim()

    int num_arms() const { return partition.num_arms(); }
    int num_clusters() const { return partition.num_clusters; }
    int dim() const { return centers.empty() ? 0 : static_cast<int>(centers.front().size()); }

    // Mean vector of the given arm (0-based arm index).
    const Vec& arm_mean(int arm) const { return centers[partition.labels[arm] - 1]; }
};

// Bijection on 1..K; map[k-1] is the image of cluster k.
struct Permutation {
    std::vector<int> map;

    bool is_bijection() const;
};

// Relabels clusters by order of first appearance; equal canonical forms
// decide partition equivalence without searching over K! permutations.
std::vector<int> canonical_labels(const Partition& p);

// Returns a human-readable description of every violated invariant
// (empty cluster, label out of range, K >= M, duplicate centers when
// required, shape mismatches). Empty result means the instance is valid.
std::vector<std::string> validate_instance(const Instance& inst, bool require_distinct_centers);

bool partitions_equivalent(const Partition& a, const Partition& b);

// True iff per-arm means agree within `tol` in Euclidean norm for every arm.
bool instances_equivalent(const Instance& a, const Instance& b, double tol);

int hamming_distance(const Partition& a, const Partition& b);

// Relabels arms by sigma and moves each center so that per-arm means are
// unchanged: the returned instance is instance-equivalent to the input.
Instance apply_permutation(const Instance& inst, const Permutation& perm);

enum class SyntheticKind { easy, moderate, challenging };

// The three K=4, M=11, d=3 benchmark instances; they differ only in the
// fourth center ([5,0,0], [1,0,0] or [0.5,0,0]).
Instance synthetic_instance(SyntheticKind kind);

struct DatasetOptions {
    char delimiter = ',';     // ' ' means any run of whitespace
    bool skip_header = false;
    int label_column = -1;    // -1: last column; features are the d columns before it
};

// Reads a delimiter-separated file with one row per arm: d numeric feature
// columns followed by a class token. Class tokens are mapped to 1..K by first
// occurrence; each center is the plain arithmetic mean of the feature rows of
// its class. Throws std::runtime_error on unreadable rows, non-numeric
// features, or a degenerate class structure (K >= M or a single class).
Instance load_dataset(const std::string& path, int feature_count, const DatasetOptions& opts = {});

struct RescaleResult {
    Instance instance;
    double scale = 1.0;  // factor applied to every center
};

// Multiplies all centers by s = sqrt(D*(inst)/target) so that the hardness
// parameter of the result equals `target` (D* scales as 1/s^2).
RescaleResult rescale_to_hardness(const Instance& inst, double target);

// Instance file format: JSON object with fields d, K, labels (M ints,
// 1-based) and centers (K arrays of d numbers).
Instance read_instance_json(const std::string& path);
void write_instance_json(const std::string& path, const Instance& inst);

}  // namespace boc
