#include "boc/agent.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace boc {

namespace {

constexpr double kDegenerateSqDist = 1e-24;
constexpr double kTwoPi = 6.283185307179586476925286766559;

// SplitMix64: value i of a stream is a pure function of (seed, i).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t stream_value(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed + (index + 1) * 0x9E3779B97F4A7C15ull);
}

// Box-Muller from two counter-indexed uniforms; exactly one normal per index.
inline double standard_normal(std::uint64_t seed, std::uint64_t index) {
    const double u1 =
        (static_cast<double>(stream_value(seed, 2 * index) >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = static_cast<double>(stream_value(seed, 2 * index + 1) >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace

Environment::Environment(const Instance& truth, std::uint64_t seed, bool zero_noise)
    : truth_(truth), seed_(seed), zero_noise_(zero_noise) {}

Vec Environment::pull(int arm) {
    if (arm < 0 || arm >= truth_.num_arms())
        throw std::invalid_argument("Environment::pull: invalid arm index");
    Vec obs = truth_.arm_mean(arm);
    if (!zero_noise_)
        for (double& x : obs) x += standard_normal(seed_, draws_++);
    else
        draws_ += obs.size();
    return obs;
}

void ArmStats::update(int arm, const Vec& observation) {
    ++counts[arm];
    ++total;
    Vec& mean = means[arm];
    const double inv = 1.0 / static_cast<double>(counts[arm]);
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += (observation[j] - mean[j]) * inv;
}

bool forced_exploration(const ArmStats& stats, long long t, int num_arms) {
    long long min_count = stats.counts[0];
    for (long long c : stats.counts) min_count = std::min(min_count, c);
    const double threshold = std::max(std::sqrt(static_cast<double>(t)) - num_arms / 2.0, 0.0);
    return static_cast<double>(min_count) <= threshold;
}

namespace {

int argmin_count(const ArmStats& stats) {
    int best = 0;
    for (int m = 1; m < static_cast<int>(stats.counts.size()); ++m)
        if (stats.counts[m] < stats.counts[best]) best = m;
    return best;
}

// argmax_m (t*lambda_m - N_m), ties toward the lowest arm index
int tracking_arm(const ArmStats& stats, const SimplexWeights& lambda, long long t) {
    int best = 0;
    double best_score = t * lambda.values[0] - static_cast<double>(stats.counts[0]);
    for (int m = 1; m < static_cast<int>(stats.counts.size()); ++m) {
        const double score = t * lambda.values[m] - static_cast<double>(stats.counts[m]);
        if (score > best_score) {
            best_score = score;
            best = m;
        }
    }
    return best;
}

void refresh_estimate(AgentState& state) {
    std::vector<double> weights(state.stats.counts.begin(), state.stats.counts.end());
    const Partition* warm =
        state.warm_start && state.estimate ? &state.estimate->partition : nullptr;
    state.estimate = weighted_kmeans(state.stats.means, weights, state.num_clusters, warm);
}

}  // namespace

int select_arm_boc(AgentState& state, long long t) {
    if (forced_exploration(state.stats, t, static_cast<int>(state.stats.counts.size())))
        return argmin_count(state.stats);

    refresh_estimate(state);
    const ClusteringResult& est = *state.estimate;
    if (min_pairwise_sq_dist(est.centers) < kDegenerateSqDist) {
        // degenerate estimate: fall back to uniform proportions for this step
        const int m_count = static_cast<int>(state.stats.counts.size());
        state.lambda_t.values.assign(m_count, 1.0 / m_count);
    } else {
        Instance plug_in{est.partition, est.centers};
        DstarOptions opts;
        if (state.warm_start && !state.warm_pair_weights.empty())
            opts.warm_pair_weights = &state.warm_pair_weights;
        opts.rel_gap_tol = 1e-10;
        HardnessSolution sol = solve_dstar(plug_in, opts);
        state.lambda_t = std::move(sol.lambda_star);
        state.warm_pair_weights = std::move(sol.pair_weights);
    }
    return tracking_arm(state.stats, state.lambda_t, t);
}

int select_arm_uniform(const AgentState& state, long long t) {
    return static_cast<int>(t % static_cast<long long>(state.stats.counts.size()));
}

int select_arm_oracle(AgentState& state, long long t, const SimplexWeights& oracle_lambda) {
    if (forced_exploration(state.stats, t, static_cast<int>(state.stats.counts.size())))
        return argmin_count(state.stats);
    refresh_estimate(state);
    return tracking_arm(state.stats, oracle_lambda, t);
}

StoppingStatistic compute_stopping(const AgentState& state, double delta, ThresholdKind kind,
                                   long long t) {
    if (!state.estimate) throw std::logic_error("compute_stopping: no estimate available yet");
    const ClusteringResult& est = *state.estimate;

    StoppingStatistic stat;
    for (std::size_t m = 0; m < state.stats.means.size(); ++m)
        stat.z1 += state.stats.counts[m] *
                   sq_dist(state.stats.means[m], est.centers[est.partition.labels[m] - 1]);

    std::vector<double> weights(state.stats.counts.begin(), state.stats.counts.end());
    stat.z2 = min_pairwise_sq_dist(est.centers) < kDegenerateSqDist
                  ? 0.0
                  : alt_inf_closed_form(est.partition, est.centers, weights);

    const double diff = std::sqrt(stat.z2) - std::sqrt(stat.z1);
    stat.z = diff > 0.0 ? 0.5 * diff * diff : 0.0;

    stat.threshold = kind == ThresholdKind::exact
                         ? beta_exact(delta, state.stats.counts, static_cast<int>(state.stats.means[0].size()))
                         : beta_heuristic(delta, t, static_cast<int>(state.stats.means[0].size()));
    stat.fired = stat.z >= stat.threshold;
    return stat;
}

namespace {

struct LoopResult {
    long long t = 0;
    bool fired = false;
    AgentState state;
};

LoopResult sampling_loop(const Instance& truth, Algorithm algorithm, double delta,
                         ThresholdKind kind, std::uint64_t seed, const TrialOptions& opts,
                         const SimplexWeights* oracle_lambda, bool stopping_enabled,
                         long long horizon) {
    const int m_count = truth.num_arms();
    const int d = truth.dim();

    SimplexWeights oracle_local;
    if (algorithm == Algorithm::oracle && !oracle_lambda) {
        oracle_local = solve_dstar(truth).lambda_star;
        oracle_lambda = &oracle_local;
    }

    Environment env(truth, seed, opts.zero_noise);
    LoopResult out;
    AgentState& state = out.state;
    state.num_clusters = truth.num_clusters();
    state.stats = ArmStats(m_count, d);
    state.warm_start = opts.warm_start;

    for (int m = 0; m < m_count; ++m) state.stats.update(m, env.pull(m));
    long long t = m_count;

    while (t < horizon) {
        int arm = 0;
        switch (algorithm) {
            case Algorithm::boc:
                arm = select_arm_boc(state, t);
                break;
            case Algorithm::uniform:
                // the baselines keep the estimate fresh the same way BOC does
                if (!forced_exploration(state.stats, t, m_count)) refresh_estimate(state);
                arm = select_arm_uniform(state, t);
                break;
            case Algorithm::oracle:
                arm = select_arm_oracle(state, t, *oracle_lambda);
                break;
        }
        state.stats.update(arm, env.pull(arm));
        ++t;
        if (stopping_enabled && state.estimate) {
            const StoppingStatistic stat = compute_stopping(state, delta, kind, t);
            if (stat.fired) {
                out.fired = true;
                break;
            }
        }
    }
    out.t = t;
    return out;
}

}  // namespace

TrialRecord run_trial(const Instance& truth, Algorithm algorithm, double delta, ThresholdKind kind,
                      std::uint64_t seed, const TrialOptions& opts,
                      const SimplexWeights* oracle_lambda) {
    if (opts.max_steps <= truth.num_arms())
        throw std::invalid_argument("run_trial: max_steps must exceed M");
    const auto start = std::chrono::steady_clock::now();

    const LoopResult loop = sampling_loop(truth, algorithm, delta, kind, seed, opts,
                                          oracle_lambda, true, opts.max_steps);

    TrialRecord record;
    record.algorithm = algorithm;
    record.delta = delta;
    record.seed = seed;
    record.tau = loop.t;
    record.terminated = loop.fired;
    if (loop.state.estimate) {
        record.recommended = loop.state.estimate->partition;
        record.correct = partitions_equivalent(record.recommended, truth.partition);
    }
    record.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return record;
}

ArmStats run_sampling(const Instance& truth, Algorithm algorithm, std::uint64_t seed,
                      long long horizon, const TrialOptions& opts,
                      const SimplexWeights* oracle_lambda) {
    // delta/kind are irrelevant with stopping disabled
    LoopResult loop = sampling_loop(truth, algorithm, 0.5, ThresholdKind::heuristic, seed, opts,
                                    oracle_lambda, false, horizon);
    return std::move(loop.state.stats);
}

}  // namespace boc
