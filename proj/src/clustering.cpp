#include "boc/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace boc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MaximinSeed maximin_init(const std::vector<Vec>& estimates, int num_clusters) {
    const int m_count = static_cast<int>(estimates.size());
    if (m_count < num_clusters || num_clusters < 1)
        throw std::invalid_argument("maximin_init: requires M >= K >= 1");

    MaximinSeed seed;
    seed.arms.push_back(0);
    seed.centers.push_back(estimates[0]);

    std::vector<double> nearest(m_count);
    std::vector<bool> chosen(m_count, false);
    chosen[0] = true;
    for (int m = 0; m < m_count; ++m) nearest[m] = sq_dist(estimates[m], estimates[0]);

    for (int k = 1; k < num_clusters; ++k) {
        // farthest unchosen arm; ties toward the lowest arm index
        int best = -1;
        for (int m = 0; m < m_count; ++m)
            if (!chosen[m] && (best < 0 || nearest[m] > nearest[best])) best = m;
        chosen[best] = true;
        seed.arms.push_back(best);
        seed.centers.push_back(estimates[best]);
        for (int m = 0; m < m_count; ++m)
            nearest[m] = std::min(nearest[m], sq_dist(estimates[m], estimates[best]));
    }
    return seed;
}

namespace {

void update_centers(const std::vector<Vec>& estimates, std::span<const double> weights,
                    const std::vector<int>& assign, int k_count, std::vector<Vec>& centers,
                    std::vector<double>& mass) {
    const int d = static_cast<int>(estimates.front().size());
    mass.assign(k_count, 0.0);
    for (auto& c : centers) std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t m = 0; m < estimates.size(); ++m) {
        const int k = assign[m];
        mass[k] += weights[m];
        for (int j = 0; j < d; ++j) centers[k][j] += weights[m] * estimates[m][j];
    }
    for (int k = 0; k < k_count; ++k)
        for (int j = 0; j < d; ++j) centers[k][j] /= mass[k];
}

}  // namespace

ClusteringResult weighted_kmeans(const std::vector<Vec>& estimates, std::span<const double> weights,
                                 int num_clusters, const Partition* warm_start, int max_iters) {
    const int m_count = static_cast<int>(estimates.size());
    const int k_count = num_clusters;
    if (m_count <= k_count) throw std::invalid_argument("weighted_kmeans: requires M > K");
    if (weights.size() != estimates.size())
        throw std::invalid_argument("weighted_kmeans: weights length differs from M");
    for (double w : weights)
        if (!(w > 0.0)) throw std::invalid_argument("weighted_kmeans: weights must be positive");

    std::vector<Vec> centers;
    std::vector<int> assign(m_count, 0), prev;
    std::vector<double> mass;

    if (warm_start) {
        if (warm_start->num_arms() != m_count || warm_start->num_clusters != k_count)
            throw std::invalid_argument("weighted_kmeans: warm start shape mismatch");
        for (int m = 0; m < m_count; ++m) assign[m] = warm_start->labels[m] - 1;
        prev = assign;  // the warm partition counts as the previous iterate
        centers.assign(k_count, Vec(estimates.front().size(), 0.0));
        update_centers(estimates, weights, assign, k_count, centers, mass);
    } else {
        centers = maximin_init(estimates, k_count).centers;
    }

    ClusteringResult result;
    std::vector<int> sizes(k_count);
    for (int iter = 0; iter < max_iters; ++iter) {
        ++result.iterations;
        // assignment: nearest center, ties toward the lowest cluster index
        for (int m = 0; m < m_count; ++m) {
            int best = 0;
            double best_dist = sq_dist(estimates[m], centers[0]);
            for (int k = 1; k < k_count; ++k) {
                const double dist_k = sq_dist(estimates[m], centers[k]);
                if (dist_k < best_dist) {
                    best_dist = dist_k;
                    best = k;
                }
            }
            assign[m] = best;
        }
        // repair any emptied cluster with the worst-served arm of a cluster of size >= 2
        sizes.assign(k_count, 0);
        for (int m = 0; m < m_count; ++m) ++sizes[assign[m]];
        for (int k = 0; k < k_count; ++k) {
            while (sizes[k] == 0) {
                int donor = -1;
                double worst = -kInf;
                for (int m = 0; m < m_count; ++m) {
                    if (sizes[assign[m]] < 2) continue;
                    const double dist_m = sq_dist(estimates[m], centers[assign[m]]);
                    if (dist_m > worst) {
                        worst = dist_m;
                        donor = m;
                    }
                }
                --sizes[assign[donor]];
                assign[donor] = k;
                ++sizes[k];
            }
        }

        if (assign == prev) {
            result.converged = true;
            break;
        }
        prev = assign;
        update_centers(estimates, weights, assign, k_count, centers, mass);
    }

    result.partition.num_clusters = k_count;
    result.partition.labels.resize(m_count);
    for (int m = 0; m < m_count; ++m) result.partition.labels[m] = assign[m] + 1;
    result.centers = std::move(centers);
    return result;
}

}  // namespace boc
