#include "boc/hardness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "boc/thresholds.hpp"

namespace boc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDegenerateSqDist = 1e-24;  // (1e-12)^2 on squared distances
}  // namespace

ClusterAggregates cluster_aggregates(const Partition& partition, std::span<const double> weights) {
    if (weights.size() != partition.labels.size())
        throw std::invalid_argument("cluster_aggregates: weights length differs from M");
    ClusterAggregates agg;
    agg.count.assign(partition.num_clusters, 0);
    agg.weight.assign(partition.num_clusters, 0.0);
    agg.min_weight.assign(partition.num_clusters, kInf);
    for (std::size_t m = 0; m < weights.size(); ++m) {
        const int k = partition.labels[m] - 1;
        ++agg.count[k];
        agg.weight[k] += weights[m];
        agg.min_weight[k] = std::min(agg.min_weight[k], weights[m]);
    }
    return agg;
}

bool SimplexWeights::strictly_interior() const {
    for (double v : values)
        if (!(v > 0.0)) return false;
    return !values.empty();
}

bool SimplexWeights::valid() const {
    double sum = 0.0;
    for (double v : values) {
        if (v < 0.0) return false;
        sum += v;
    }
    return std::abs(sum - 1.0) <= 1e-12;
}

double alt_inf_closed_form(const Partition& partition, const std::vector<Vec>& centers,
                           std::span<const double> weights) {
    const auto agg = cluster_aggregates(partition, weights);
    const int k_count = partition.num_clusters;
    if (k_count < 2)
        throw std::logic_error("alt_inf_closed_form: need at least two clusters");

    for (double w : weights)
        if (w == 0.0) return 0.0;

    double best = kInf;
    for (int k = 0; k < k_count; ++k) {
        for (int kp = 0; kp < k_count; ++kp) {
            if (kp == k) continue;
            const double wbar = agg.min_weight[k];
            const double w = agg.weight[kp];
            const double value = wbar * w / (wbar + w) * sq_dist(centers[k], centers[kp]);
            best = std::min(best, value);
        }
    }
    return best;
}

double dist_objective(const Instance& base, const Instance& alt, std::span<const double> weights) {
    if (base.num_arms() != alt.num_arms() || base.dim() != alt.dim() ||
        weights.size() != static_cast<std::size_t>(base.num_arms()))
        throw std::invalid_argument("dist_objective: shape mismatch");
    double sum = 0.0;
    for (int m = 0; m < base.num_arms(); ++m)
        sum += weights[m] * sq_dist(base.arm_mean(m), alt.arm_mean(m));
    return sum;
}

AltInfWitness brute_force_alt_inf(const Partition& partition, const std::vector<Vec>& centers,
                                  std::span<const double> weights) {
    for (double w : weights)
        if (!(w > 0.0)) throw std::invalid_argument("brute_force_alt_inf: weights must be strictly positive");
    const auto agg = cluster_aggregates(partition, weights);
    const int m_count = partition.num_arms();
    const int k_count = partition.num_clusters;

    Instance base{partition, centers};

    AltInfWitness best;
    best.value = kInf;
    for (int m = 0; m < m_count; ++m) {
        const int from = partition.labels[m] - 1;
        for (int to = 0; to < k_count; ++to) {
            if (to == from) continue;
            Instance alt{partition, centers};
            alt.partition.labels[m] = to + 1;
            const double lam = weights[m];
            const double w_to = agg.weight[to];
            // optimal center of the receiving cluster is the weighted mean
            Vec& moved = alt.centers[to];
            for (std::size_t j = 0; j < moved.size(); ++j)
                moved[j] = (lam * centers[from][j] + w_to * centers[to][j]) / (lam + w_to);
            const double value = dist_objective(base, alt, weights);
            if (value < best.value ||
                (value == best.value && alt.partition.labels < best.alternative.partition.labels)) {
                best.value = value;
                best.alternative = std::move(alt);
            }
        }
    }
    if (best.value == kInf)
        throw std::logic_error("brute_force_alt_inf: no admissible relabeling (partition invalid)");
    return best;
}

AllPartitionsResult brute_force_all_partitions(const std::vector<Vec>& reference_means,
                                               std::span<const double> weights,
                                               const Partition& excluded, int num_clusters) {
    const int m_count = static_cast<int>(reference_means.size());
    const int k_count = num_clusters;
    if (m_count > 12)
        throw std::invalid_argument("brute_force_all_partitions: M > 12 would enumerate too many partitions");
    if (weights.size() != reference_means.size())
        throw std::invalid_argument("brute_force_all_partitions: weights length differs from M");
    for (double w : weights)
        if (!(w > 0.0))
            throw std::invalid_argument("brute_force_all_partitions: weights must be strictly positive");
    const int d = static_cast<int>(reference_means.front().size());

    const std::vector<int> excluded_canonical = canonical_labels(excluded);

    AllPartitionsResult best;
    best.value = kInf;

    Partition candidate;
    candidate.labels.assign(m_count, 1);
    candidate.num_clusters = k_count;
    std::vector<Vec> centers(k_count, Vec(d, 0.0));
    std::vector<double> cluster_weight(k_count, 0.0);

    for (;;) {
        // surjective and not partition-equivalent to the excluded one
        cluster_weight.assign(k_count, 0.0);
        for (int m = 0; m < m_count; ++m) cluster_weight[candidate.labels[m] - 1] += weights[m];
        bool surjective = true;
        for (int k = 0; k < k_count; ++k) surjective &= cluster_weight[k] > 0.0;
        if (surjective && canonical_labels(candidate) != excluded_canonical) {
            for (auto& c : centers) std::fill(c.begin(), c.end(), 0.0);
            for (int m = 0; m < m_count; ++m) {
                const int k = candidate.labels[m] - 1;
                for (int j = 0; j < d; ++j) centers[k][j] += weights[m] * reference_means[m][j];
            }
            for (int k = 0; k < k_count; ++k)
                for (int j = 0; j < d; ++j) centers[k][j] /= cluster_weight[k];
            double value = 0.0;
            for (int m = 0; m < m_count; ++m)
                value += weights[m] * sq_dist(reference_means[m], centers[candidate.labels[m] - 1]);
            // strict improvement keeps the lexicographically smallest minimizer
            if (value < best.value) {
                best.value = value;
                best.partition = candidate;
                best.centers = centers;
            }
        }
        // odometer over [K]^M in lexicographic order
        int pos = m_count - 1;
        while (pos >= 0 && candidate.labels[pos] == k_count) candidate.labels[pos--] = 1;
        if (pos < 0) break;
        ++candidate.labels[pos];
    }
    if (best.value == kInf)
        throw std::logic_error("brute_force_all_partitions: no candidate partition found");
    return best;
}

namespace {

// One ordered cluster pair (k, k') and its objective coefficients:
// f_p(w) = a_from / w_k + a_to / w_k'.
struct PairTerm {
    int from = 0;
    int to = 0;
    double a_from = 0.0;  // n(k) * ||mu(k)-mu(k')||^{-2}
    double a_to = 0.0;    //        ||mu(k)-mu(k')||^{-2}
};

// Gaussian elimination with partial pivoting; returns false when singular.
bool solve_linear(std::vector<std::vector<double>>& a, std::vector<double>& b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int row = col + 1; row < n; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        if (std::abs(a[pivot][col]) < 1e-300) return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int row = col + 1; row < n; ++row) {
            const double factor = a[row][col] / a[col][col];
            for (int j = col; j < n; ++j) a[row][j] -= factor * a[col][j];
            b[row] -= factor * b[col];
        }
    }
    for (int col = n - 1; col >= 0; --col) {
        for (int j = col + 1; j < n; ++j) b[col] -= a[col][j] * b[j];
        b[col] /= a[col][col];
    }
    return true;
}

}  // namespace

HardnessSolution solve_dstar(const Instance& inst, const DstarOptions& opts) {
    {
        const auto violations = validate_instance(inst, true);
        if (!violations.empty())
            throw std::invalid_argument("solve_dstar: instance not admissible: " + violations.front());
    }
    if (min_pairwise_sq_dist(inst.centers) < kDegenerateSqDist)
        throw std::invalid_argument("solve_dstar: centers closer than 1e-12, D* diverges");

    const int k_count = inst.num_clusters();
    const auto agg = cluster_aggregates(inst.partition,
                                        std::vector<double>(inst.num_arms(), 1.0));

    std::vector<PairTerm> pairs;
    for (int k = 0; k < k_count; ++k) {
        for (int kp = 0; kp < k_count; ++kp) {
            if (kp == k) continue;
            const double inv = 1.0 / sq_dist(inst.centers[k], inst.centers[kp]);
            pairs.push_back({k, kp, agg.count[k] * inv, inv});
        }
    }
    const int p_count = static_cast<int>(pairs.size());
    if (p_count == 0)
        throw std::invalid_argument("solve_dstar: no admissible cluster pair (K < 2?)");

    // normalize the coefficients so the iteration is well conditioned at any
    // center scale; the optimizers are invariant, the objective scales back
    double coeff_scale = 0.0;
    for (const PairTerm& p : pairs) coeff_scale = std::max(coeff_scale, p.a_from);
    for (PairTerm& p : pairs) {
        p.a_from /= coeff_scale;
        p.a_to /= coeff_scale;
    }

    std::vector<double> nu(p_count, 1.0 / p_count);
    if (opts.warm_pair_weights && static_cast<int>(opts.warm_pair_weights->size()) == p_count) {
        double sum = 0.0;
        for (double v : *opts.warm_pair_weights) sum += std::max(v, 0.0);
        if (sum > 0.0)
            for (int p = 0; p < p_count; ++p)
                nu[p] = std::max((*opts.warm_pair_weights)[p], 1e-300) / sum;
    }

    std::vector<double> cluster_mass(k_count), w(k_count), phi(p_count);
    // incumbent: the iterate whose own primal-dual gap f - lb is smallest;
    // both w* and d_star are reported from it so they stay consistent
    std::vector<double> best_nu = nu;
    double best_gap = kInf, eta = 0.7;
    int iterations = 0, last_progress = 0;
    double gap_at_last_check = kInf;

    auto recover_w = [&](const std::vector<double>& dual) {
        std::fill(cluster_mass.begin(), cluster_mass.end(), 0.0);
        for (int p = 0; p < p_count; ++p) {
            cluster_mass[pairs[p].from] += dual[p] * pairs[p].a_from;
            cluster_mass[pairs[p].to] += dual[p] * pairs[p].a_to;
        }
        double g = 0.0;
        for (int k = 0; k < k_count; ++k) {
            w[k] = std::sqrt(cluster_mass[k]);
            g += w[k];
        }
        for (int k = 0; k < k_count; ++k) w[k] /= g;
        return g;
    };

    // evaluates a candidate dual point and keeps it when its gap improves
    auto consider = [&](const std::vector<double>& dual) {
        const double g = recover_w(dual);
        double f = 0.0;
        for (int p = 0; p < p_count; ++p) {
            phi[p] = pairs[p].a_from / w[pairs[p].from] + pairs[p].a_to / w[pairs[p].to];
            f = std::max(f, phi[p]);
        }
        if (f - g * g < best_gap) {
            best_gap = f - g * g;
            best_nu = dual;
        }
        return f;
    };

    // phase 1: multiplicative weights on the pair distribution, globally
    // convergent and cheap; runs in slices so the Newton polish below can
    // finish off the last digits whenever plain updates stall
    auto mw_slice = [&](int cap) {
        eta = 0.7;
        while (iterations < cap) {
            ++iterations;
            const double f = consider(nu);
            if (best_gap <= opts.rel_gap_tol * f) return;
            if (iterations - last_progress >= opts.stall_window) {
                const bool stuck =
                    best_gap > (1.0 - opts.stall_rel_improvement) * gap_at_last_check;
                if (stuck && eta <= 1e-3) return;  // step at the floor and still no progress
                if (best_gap > 0.9 * gap_at_last_check) eta = std::max(eta * 0.5, 1e-3);
                gap_at_last_check = best_gap;
                last_progress = iterations;
            }
            double sum = 0.0;
            for (int p = 0; p < p_count; ++p) {
                nu[p] = std::max(nu[p] * std::exp(eta * (phi[p] / f - 1.0)), 1e-40);
                sum += nu[p];
            }
            for (int p = 0; p < p_count; ++p) nu[p] /= sum;
        }
    };

    // phase 2: Newton on the smoothed primal F_mu(w) = mu*log sum_p e^{f_p/mu}
    // over the w-simplex. The Hessian is positive definite for every mu > 0,
    // and the softmax weights are a dual point feeding the same certificate.
    std::vector<double> fp(p_count), q(p_count), grad(k_count), wp(k_count);
    auto polish = [&]() {
        const double f0 = consider(best_nu);
        if (best_gap <= opts.rel_gap_tol * f0) return;
        wp = w;  // seed from the incumbent's recovered primal point
        for (double& v : wp) v = std::max(v, 1e-12);
        double norm = 0.0;
        for (double v : wp) norm += v;
        for (double& v : wp) v /= norm;

        auto eval_fmu = [&](const std::vector<double>& point, double mu) {
            double fmax = -kInf;
            for (int p = 0; p < p_count; ++p) {
                fp[p] = pairs[p].a_from / point[pairs[p].from] + pairs[p].a_to / point[pairs[p].to];
                fmax = std::max(fmax, fp[p]);
            }
            double z = 0.0;
            for (int p = 0; p < p_count; ++p) z += std::exp((fp[p] - fmax) / mu);
            return fmax + mu * std::log(z);
        };

        double mu = std::max(best_gap, opts.rel_gap_tol * f0);
        const double mu_floor = opts.rel_gap_tol * f0 / 50.0;
        double stalled_since = best_gap;
        for (int stage = 0; stage < 40; ++stage) {
            for (int step = 0; step < 30; ++step) {
                ++iterations;
                const double fmu = eval_fmu(wp, mu);
                double fmax = -kInf;
                for (int p = 0; p < p_count; ++p) fmax = std::max(fmax, fp[p]);
                double z = 0.0;
                for (int p = 0; p < p_count; ++p) {
                    q[p] = std::exp((fp[p] - fmax) / mu);
                    z += q[p];
                }
                for (int p = 0; p < p_count; ++p) q[p] /= z;

                // gradient and Hessian of F_mu in w
                std::fill(grad.begin(), grad.end(), 0.0);
                std::vector<std::vector<double>> kkt(k_count + 1,
                                                     std::vector<double>(k_count + 1, 0.0));
                for (int p = 0; p < p_count; ++p) {
                    const PairTerm& pt = pairs[p];
                    const double gi = -pt.a_from / (wp[pt.from] * wp[pt.from]);
                    const double gj = -pt.a_to / (wp[pt.to] * wp[pt.to]);
                    grad[pt.from] += q[p] * gi;
                    grad[pt.to] += q[p] * gj;
                    // curvature of f_p plus the softmax covariance term
                    kkt[pt.from][pt.from] += q[p] * (-2.0 * gi / wp[pt.from] + gi * gi / mu);
                    kkt[pt.to][pt.to] += q[p] * (-2.0 * gj / wp[pt.to] + gj * gj / mu);
                    kkt[pt.from][pt.to] += q[p] * gi * gj / mu;
                    kkt[pt.to][pt.from] += q[p] * gi * gj / mu;
                }
                double diag_scale = 0.0;
                for (int k = 0; k < k_count; ++k) {
                    for (int l = 0; l < k_count; ++l) kkt[k][l] -= grad[k] * grad[l] / mu;
                    diag_scale = std::max(diag_scale, std::abs(kkt[k][k]));
                }
                std::vector<double> rhs(k_count + 1, 0.0);
                for (int k = 0; k < k_count; ++k) {
                    kkt[k][k] += 1e-12 * diag_scale;
                    kkt[k][k_count] = 1.0;
                    kkt[k_count][k] = 1.0;
                    rhs[k] = -grad[k];
                }
                if (!solve_linear(kkt, rhs)) break;

                double t = 1.0;
                for (int k = 0; k < k_count; ++k)
                    if (rhs[k] < 0.0) t = std::min(t, -0.99 * wp[k] / rhs[k]);
                bool moved = false;
                std::vector<double> trial = wp;
                for (int back = 0; back < 40; ++back) {
                    for (int k = 0; k < k_count; ++k) trial[k] = wp[k] + t * rhs[k];
                    if (eval_fmu(trial, mu) < fmu) {
                        moved = true;
                        break;
                    }
                    t *= 0.5;
                }
                if (!moved) break;
                wp = trial;
            }
            eval_fmu(wp, mu);  // refresh fp -> dual point
            double fmax = -kInf;
            for (int p = 0; p < p_count; ++p) fmax = std::max(fmax, fp[p]);
            double z = 0.0;
            for (int p = 0; p < p_count; ++p) {
                q[p] = std::exp((fp[p] - fmax) / mu);
                z += q[p];
            }
            for (int p = 0; p < p_count; ++p) q[p] /= z;
            const double f = consider(q);
            if (best_gap <= opts.rel_gap_tol * f) return;
            if (mu <= mu_floor) {
                if (best_gap > 0.9 * stalled_since) return;  // smoothing exhausted
                stalled_since = best_gap;
            }
            mu = std::max(0.05 * mu, mu_floor);
        }
    };

    const int total_budget = opts.max_iterations;
    mw_slice(std::min(3000, total_budget));
    for (int cycle = 0; cycle < 4; ++cycle) {
        {
            const double f = consider(best_nu);
            if (best_gap <= opts.rel_gap_tol * f) break;
        }
        polish();
        {
            const double f = consider(best_nu);
            if (best_gap <= opts.rel_gap_tol * f || iterations >= total_budget) break;
        }
        nu = best_nu;
        for (double& v : nu) v = std::max(v, 1e-40);
        double sum = 0.0;
        for (double v : nu) sum += v;
        for (double& v : nu) v /= sum;
        last_progress = iterations;
        gap_at_last_check = best_gap;
        mw_slice(std::min(iterations + 20000, total_budget));
    }

    const double g = recover_w(best_nu);
    double f_star = 0.0;
    for (int p = 0; p < p_count; ++p)
        f_star = std::max(f_star, pairs[p].a_from / w[pairs[p].from] + pairs[p].a_to / w[pairs[p].to]);

    HardnessSolution sol;
    sol.d_star = 2.0 * f_star * coeff_scale;
    sol.gap = std::max(2.0 * (f_star - g * g) * coeff_scale, 0.0);
    sol.iterations = iterations;
    sol.w_star.values = w;
    sol.pair_weights = best_nu;
    sol.lambda_star.values.resize(inst.num_arms());
    for (int m = 0; m < inst.num_arms(); ++m) {
        const int k = inst.partition.labels[m] - 1;
        sol.lambda_star.values[m] = w[k] / agg.count[k];
    }
    return sol;
}

double lower_bound(double delta, double d_star) {
    return binary_kl(delta, 1.0 - delta) * d_star;
}

}  // namespace boc
