#pragma once
// Shared test helpers: seeded random instances and the independent oracles
// (simplex grid search, dense-grid psi, alpha-grid stopping statistic) used
// to validate the library implementations. Nothing here calls into the
// implementation path it is meant to check.
#include <cmath>
#include <random>
#include <vector>

#include "boc/model.hpp"

namespace boc_test {

inline boc::Instance random_admissible_instance(std::mt19937_64& rng, int max_m, int max_k,
                                                int max_d, double min_gap) {
    std::uniform_int_distribution<int> pick_k(2, max_k);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (;;) {
        boc::Instance inst;
        const int k = pick_k(rng);
        std::uniform_int_distribution<int> pick_m(k + 1, max_m);
        const int m = pick_m(rng);
        std::uniform_int_distribution<int> pick_d(1, max_d);
        const int d = pick_d(rng);
        inst.partition.num_clusters = k;
        inst.partition.labels.resize(m);
        for (int i = 0; i < k; ++i) inst.partition.labels[i] = i + 1;
        std::uniform_int_distribution<int> pick_label(1, k);
        for (int i = k; i < m; ++i) inst.partition.labels[i] = pick_label(rng);
        inst.centers.assign(k, boc::Vec(d));
        for (auto& c : inst.centers)
            for (double& x : c) x = coord(rng);
        if (std::sqrt(boc::min_pairwise_sq_dist(inst.centers)) > min_gap) return inst;
    }
}

inline std::vector<double> random_positive_weights(std::mt19937_64& rng, int n, double lo = 0.05,
                                                   double hi = 1.0) {
    std::uniform_real_distribution<double> weight(lo, hi);
    std::vector<double> w(n);
    for (double& v : w) v = weight(rng);
    return w;
}

// F(w) of the finite minimax, evaluated directly from its definition
// (all ordered cluster pairs).
inline double minimax_objective(const boc::Instance& inst, const std::vector<double>& w) {
    const int k_count = inst.num_clusters();
    std::vector<int> n(k_count, 0);
    for (int label : inst.partition.labels) ++n[label - 1];
    double worst = 0.0;
    for (int k = 0; k < k_count; ++k) {
        for (int kp = 0; kp < k_count; ++kp) {
            if (kp == k) continue;
            const double value =
                (n[k] / w[k] + 1.0 / w[kp]) / boc::sq_dist(inst.centers[k], inst.centers[kp]);
            worst = std::max(worst, value);
        }
    }
    return worst;
}

// Grid search for D* over the K-simplex at the given step (K = 2 or 3).
inline double grid_search_dstar(const boc::Instance& inst, double step) {
    const int k_count = inst.num_clusters();
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> w(k_count);
    if (k_count == 2) {
        for (double w1 = step; w1 < 1.0; w1 += step) {
            w = {w1, 1.0 - w1};
            best = std::min(best, minimax_objective(inst, w));
        }
    } else if (k_count == 3) {
        for (double w1 = step; w1 < 1.0; w1 += step)
            for (double w2 = step; w1 + w2 < 1.0; w2 += step) {
                w = {w1, w2, 1.0 - w1 - w2};
                best = std::min(best, minimax_objective(inst, w));
            }
    } else {
        throw std::invalid_argument("grid_search_dstar: only K=2 or K=3");
    }
    return 2.0 * best;
}

// Dense staged grid minimization of psi(h) over (1/2, 1); unimodality lets
// each stage shrink the bracket around the best point.
inline double grid_psi(double x, double zeta_of(double), double final_resolution = 1e-7) {
    auto objective = [&](double h) {
        return 2.0 - 2.0 * std::log(4.0 * h) + std::log(zeta_of(2.0 * h)) / h -
               std::log(1.0 - h) / (2.0 * h) + x / h;
    };
    double lo = 0.5 + 1e-9, hi = 1.0 - 1e-9;
    double best_h = 0.75, best = objective(best_h);
    for (double resolution = 1e-3; resolution >= final_resolution; resolution *= 1e-2) {
        for (double h = lo; h <= hi; h += resolution) {
            const double v = objective(h);
            if (v < best) {
                best = v;
                best_h = h;
            }
        }
        lo = std::max(0.5 + 1e-9, best_h - 2.0 * resolution);
        hi = std::min(1.0 - 1e-9, best_h + 2.0 * resolution);
    }
    return best;
}

}  // namespace boc_test
