#pragma once
/*
Instance hardness: the inner infimum over alternative instances, the hardness
parameter D*, and the optimal pull proportions.

For a partition c with centers U and per-arm weights lambda, the infimum over
all alternative instances (c', U') for which c is not a correct partition of

  Dist(c', U') = sum_m lambda_m * ||mu(c_m) - mu'(c'_m)||^2

reduces to single-arm relabelings and has the closed form (for lambda > 0)

  min over ordered pairs k != k' of
      wbar(k) * w(k') / (wbar(k) + w(k')) * ||mu(k) - mu(k')||^2

with w(k) the summed weight of cluster k and wbar(k) its minimum single-arm
weight; the value is 0 whenever some weight is 0. Relabelings out of a
singleton cluster are included: vacating cluster k is compensated by a free
equal-center split elsewhere, and the cheapest such move merges the singleton
with the lightest arm of another cluster, which is exactly the swapped pair's
term. The expression is positively homogeneous of degree 1 in the weights, so
it applies unchanged to raw pull counts.

The hardness parameter is the finite convex minimax

  D*(c, U) = 2 * min over strictly positive w in the K-simplex of
             F(w) := max over ordered pairs k != k' of
                     (n(k)/w(k) + 1/w(k')) * ||mu(k) - mu(k')||^{-2}

with n(k) the arm count of cluster k; the minimizer w* is unique and the
optimal pull proportions follow as lambda*_m = w*(c_m) / n(c_m).

solve_dstar works on the dual of the minimax. Writing F(w) =
max_p sum_k alpha_{p,k} / w_k over pairs p, any pair distribution nu yields
the certified lower bound  sum_p nu_p f_p(w) >= (sum_k sqrt(A_k(nu)))^2  with
A_k = sum_p nu_p alpha_{p,k}, attained at w_k proportional to sqrt(A_k).
Multiplicative-weight updates on nu (boosting pairs whose f_p at the
recovered w is large) drive the duality gap F(w) - (sum_k sqrt(A_k))^2 to
zero; the gap is tracked on incumbents and reported.

The two brute-force enumerators exist to validate the reductions above and to
evaluate the otherwise intractable second term of the log-GLR statistic at
toy sizes; Alt(c) itself is never materialized.

Everything here is a pure function; solve_dstar keeps no global state (warm
starts are caller-provided).
*/
#include <span>
#include <vector>

#include "boc/model.hpp"

namespace boc {

// Per-cluster aggregates of a weight vector over arms:
// count n(k), total weight w(k), minimum single-arm weight wbar(k).
struct ClusterAggregates {
    std::vector<int> count;
    std::vector<double> weight;
    std::vector<double> min_weight;
};

ClusterAggregates cluster_aggregates(const Partition& partition, std::span<const double> weights);

// Nonnegative weights summing to 1; strictly interior when every entry > 0.
struct SimplexWeights {
    std::vector<double> values;

    bool strictly_interior() const;
    // sum within 1e-12 of 1 and no negative entries
    bool valid() const;
};

double alt_inf_closed_form(const Partition& partition, const std::vector<Vec>& centers,
                           std::span<const double> weights);

// Dist(alt) under `weights`, measured between per-arm means of base and alt.
double dist_objective(const Instance& base, const Instance& alt, std::span<const double> weights);

struct AltInfWitness {
    double value = 0.0;
    Instance alternative;  // minimizing alternative instance
};

// Enumerates all single-arm relabelings (Hamming distance 1, empty donor
// clusters permitted); for each the optimal alternative keeps every center
// except the target's, which moves to the weighted mean
// (lambda_m*mu(c_m) + w(k')*mu(k')) / (lambda_m + w(k')).
// Requires strictly positive weights. Ties broken toward the
// lexicographically smallest label vector.
AltInfWitness brute_force_alt_inf(const Partition& partition, const std::vector<Vec>& centers,
                                  std::span<const double> weights);

struct AllPartitionsResult {
    double value = 0.0;
    Partition partition;
    std::vector<Vec> centers;
};

// Enumerates every surjective label vector in [K]^M not equivalent to
// `excluded`; per candidate the optimal centers are the weighted means of the
// reference vectors in each cluster. With reference = true per-arm means this
// is the unrestricted infimum over Alt(excluded); with reference = empirical
// estimates it is the second term of the log-GLR. Guarded to M <= 12.
AllPartitionsResult brute_force_all_partitions(const std::vector<Vec>& reference_means,
                                               std::span<const double> weights,
                                               const Partition& excluded, int num_clusters);

struct HardnessSolution {
    double d_star = 0.0;
    SimplexWeights w_star;       // over the K clusters
    SimplexWeights lambda_star;  // over the M arms
    std::vector<double> pair_weights;  // dual distribution over ordered pairs; reusable as warm start
    int iterations = 0;
    double gap = 0.0;  // certified bound on the suboptimality of d_star
};

struct DstarOptions {
    const std::vector<double>* warm_pair_weights = nullptr;
    double rel_gap_tol = 1e-12;
    int max_iterations = 200000;
    // stop when the relative gap improvement over this many iterations stalls
    int stall_window = 200;
    double stall_rel_improvement = 1e-10;
};

// Throws std::invalid_argument when the instance is not admissible (invalid
// partition, or centers closer than 1e-12 so that D* diverges). A gap above
// 1e-6 relative signals non-convergence and is reported in the result, never
// silently dropped.
HardnessSolution solve_dstar(const Instance& inst, const DstarOptions& opts = {});

// Information-theoretic floor on the expected sample complexity:
// d_KL(delta, 1-delta) * D*.
double lower_bound(double delta, double d_star);

}  // namespace boc
