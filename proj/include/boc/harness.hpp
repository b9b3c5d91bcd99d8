#pragma once
/*
Experiment orchestration: load a configuration, run every (algorithm, delta)
cell for the requested number of trials on a bounded worker pool, aggregate,
and emit per-trial JSON lines plus a CSV summary.

Seeding: trial i of the cell with delta index j runs with seed
base + j*trials + i. Seeds therefore depend only on the delta and the trial
index, never on the algorithm list, so adding an algorithm perturbs nothing
and the same noise streams are reused across algorithms at the same delta.
Parallel and serial runs produce identical records apart from wall time.
*/
#include <optional>
#include <string>
#include <vector>

#include "boc/agent.hpp"

namespace boc {

struct DatasetSource {
    std::string path;
    int feature_count = 0;
    double target_dstar = 0.0;
    DatasetOptions options;
};

struct ExperimentConfig {
    // exactly one instance source
    std::optional<Instance> inline_instance;
    std::optional<std::string> instance_file;
    std::optional<DatasetSource> dataset;
    std::optional<SyntheticKind> synthetic;

    std::vector<Algorithm> algorithms;
    std::vector<double> deltas;
    int trials = 0;
    ThresholdKind threshold = ThresholdKind::heuristic;
    std::uint64_t base_seed = 0;
    int parallelism = 0;               // 0: hardware concurrency
    std::optional<bool> warm_start;    // default: on iff M > 200
    long long max_steps = 0;
    std::string trials_path;
    std::string summary_path;
};

ExperimentConfig load_config(const std::string& path);

struct SummaryRow {
    Algorithm algorithm = Algorithm::boc;
    double delta = 0.0;
    int trials = 0;
    double mean_tau = 0.0;  // over terminated trials; sample std (divisor n-1)
    double std_tau = 0.0;
    int errors = 0;
    int nonterminated = 0;
    double lower_bound = 0.0;
};

struct ExperimentResult {
    Instance instance;
    double d_star = 0.0;
    std::vector<TrialRecord> records;
    std::vector<SummaryRow> summary;
};

// Resolves and validates the instance, computes D* and the oracle sampling
// proportions once, then runs trials cells in parallel.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Per-cell aggregation; independent of record order. Cells are emitted in
// (delta, algorithm) order as given. Throws on an empty record set.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records,
                                  const std::vector<Algorithm>& algorithms,
                                  const std::vector<double>& deltas, double d_star);

// Trial records as JSON lines; summary as CSV with header
// algorithm,delta,trials,mean_tau,std_tau,errors,nonterminated,lower_bound
void emit(const std::vector<TrialRecord>& records, const std::vector<SummaryRow>& summary,
          const std::string& trials_path, const std::string& summary_path);

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

}  // namespace boc
