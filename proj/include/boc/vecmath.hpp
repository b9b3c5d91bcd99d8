#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace boc {

using Vec = std::vector<double>;

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

inline double dist(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(sq_dist(a, b));
}

// min over k != k' of ||centers[k] - centers[k']||^2
inline double min_pairwise_sq_dist(const std::vector<Vec>& centers) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centers.size(); ++i)
        for (std::size_t j = i + 1; j < centers.size(); ++j)
            best = std::min(best, sq_dist(centers[i], centers[j]));
    return best;
}

}  // namespace boc
