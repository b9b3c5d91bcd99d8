#pragma once
/*
The sequential decision loop.

At each time step t (after an initialization pulling every arm once) the
agent refreshes its estimate (c^t, U^t) by weighted K-means unless the
forced-exploration guard  min_m N_m(t) <= max(sqrt(t) - M/2, 0)  fires, in
which case the estimate is carried forward and the least-pulled arm is
sampled. Otherwise BOC tracks the plug-in optimal proportions lambda*(t)
(from solve_dstar on the estimate) via  argmax_m (t*lambda*_m(t) - N_m(t));
Oracle tracks the fixed lambda* of the true instance; Uniform cycles
round-robin. All three refresh the estimate the same way, since the stopping
statistic needs it.

After the t-th observation the stopping statistic uses the post-update counts
and means but the estimate computed before the observation:

  Z1(t) = sum_m N_m(t) * ||muhat_m(t) - U^{t-1}(c^{t-1}_m)||^2
  Z2(t) = alt_inf_closed_form(c^{t-1}, U^{t-1}, weights = N(t))
  Z(t)  = 1/2 * ((-sqrt(Z1) + sqrt(Z2))_+)^2,   stop when Z(t) >= beta(delta, t).

If the estimate's centers are closer than 1e-12 the step falls back to
uniform lambda and sets Z2 = 0 (no stopping on a degenerate estimate).

Noise is steered by a counter-based generator: the i-th standard-normal draw
of a trial depends only on (seed, i), so identical seeds give identical
observation streams regardless of scheduling. One trial is one isolated state
machine; trials run concurrently without shared mutable state.
*/
#include <cstdint>
#include <optional>

#include "boc/clustering.hpp"
#include "boc/hardness.hpp"
#include "boc/model.hpp"
#include "boc/thresholds.hpp"

namespace boc {

enum class Algorithm { boc, uniform, oracle };

// Gaussian bandit environment around a fixed true instance: pulling arm m
// returns mu(c_m) + eta with eta ~ N(0, I_d), independent across pulls.
class Environment {
public:
    Environment(const Instance& truth, std::uint64_t seed, bool zero_noise = false);

    // Observation for the given 0-based arm; advances the noise counter.
    Vec pull(int arm);

    const Instance& truth() const { return truth_; }

private:
    Instance truth_;
    std::uint64_t seed_;
    std::uint64_t draws_ = 0;  // standard-normal draws consumed so far
    bool zero_noise_;
};

// Pull counts and running per-arm means; sum of counts equals t.
struct ArmStats {
    std::vector<long long> counts;
    std::vector<Vec> means;
    long long total = 0;

    ArmStats() = default;
    ArmStats(int num_arms, int dim)
        : counts(num_arms, 0), means(num_arms, Vec(dim, 0.0)) {}

    void update(int arm, const Vec& observation);
};

struct StoppingStatistic {
    double z1 = 0.0;
    double z2 = 0.0;
    double z = 0.0;
    double threshold = 0.0;
    bool fired = false;
};

struct AgentState {
    int num_clusters = 0;
    ArmStats stats;
    std::optional<ClusteringResult> estimate;  // (c^{t-1}, U^{t-1}) at stopping time
    SimplexWeights lambda_t;                   // BOC's plug-in proportions, empty until first solve
    std::vector<double> warm_pair_weights;     // solver warm start, used when warm_start is on
    bool warm_start = false;
};

bool forced_exploration(const ArmStats& stats, long long t, int num_arms);

// Refreshes the estimate by weighted K-means and, for BOC, lambda*(t);
// returns the arm to pull. Forced steps carry the estimate forward unchanged.
int select_arm_boc(AgentState& state, long long t);
int select_arm_uniform(const AgentState& state, long long t);
int select_arm_oracle(AgentState& state, long long t, const SimplexWeights& oracle_lambda);

// Stopping statistic at time t, using post-update stats and the pre-update
// estimate held in the state.
StoppingStatistic compute_stopping(const AgentState& state, double delta, ThresholdKind kind,
                                   long long t);

struct TrialOptions {
    long long max_steps = 2'000'000;
    bool warm_start = false;
    bool zero_noise = false;
};

struct TrialRecord {
    Algorithm algorithm = Algorithm::boc;
    double delta = 0.0;
    std::uint64_t seed = 0;
    long long tau = 0;
    Partition recommended;
    bool correct = false;
    bool terminated = false;
    double wall_ms = 0.0;
};

// Runs one full trial: initialization, sampling loop, stopping rule,
// recommendation. A trial that hits max_steps is marked non-terminated.
// oracle_lambda may be precomputed (once per instance); when absent it is
// derived from the truth for Algorithm::oracle.
TrialRecord run_trial(const Instance& truth, Algorithm algorithm, double delta, ThresholdKind kind,
                      std::uint64_t seed, const TrialOptions& opts = {},
                      const SimplexWeights* oracle_lambda = nullptr);

// Sampling loop with the stopping rule disabled, run to the given horizon;
// returns the final pull statistics (for tracking experiments).
ArmStats run_sampling(const Instance& truth, Algorithm algorithm, std::uint64_t seed,
                      long long horizon, const TrialOptions& opts = {},
                      const SimplexWeights* oracle_lambda = nullptr);

}  // namespace boc
