#include "boc/harness.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace boc {

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::boc: return "boc";
        case Algorithm::uniform: return "uniform";
        case Algorithm::oracle: return "oracle";
    }
    return "?";
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "boc") return Algorithm::boc;
    if (name == "uniform") return Algorithm::uniform;
    if (name == "oracle") return Algorithm::oracle;
    throw std::invalid_argument("unknown algorithm id: " + name);
}

namespace {

SyntheticKind synthetic_from_name(const std::string& name) {
    if (name == "easy") return SyntheticKind::easy;
    if (name == "moderate") return SyntheticKind::moderate;
    if (name == "challenging") return SyntheticKind::challenging;
    throw std::invalid_argument("unknown synthetic instance: " + name);
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("load_config: " + path + ": " + e.what());
    }

    ExperimentConfig cfg;
    const auto& src = j.at("instance");
    int sources = 0;
    if (src.contains("inline")) {
        ++sources;
        Instance inst;
        const auto& ji = src.at("inline");
        inst.partition.num_clusters = ji.at("K").get<int>();
        inst.partition.labels = ji.at("labels").get<std::vector<int>>();
        for (const auto& row : ji.at("centers")) inst.centers.push_back(row.get<Vec>());
        cfg.inline_instance = std::move(inst);
    }
    if (src.contains("file")) {
        ++sources;
        cfg.instance_file = src.at("file").get<std::string>();
    }
    if (src.contains("synthetic")) {
        ++sources;
        cfg.synthetic = synthetic_from_name(src.at("synthetic").get<std::string>());
    }
    if (src.contains("dataset")) {
        ++sources;
        DatasetSource ds;
        const auto& jd = src.at("dataset");
        ds.path = jd.at("path").get<std::string>();
        ds.feature_count = jd.at("d").get<int>();
        ds.target_dstar = jd.at("target_dstar").get<double>();
        if (jd.contains("delimiter")) ds.options.delimiter = jd.at("delimiter").get<std::string>().at(0);
        if (jd.contains("skip_header")) ds.options.skip_header = jd.at("skip_header").get<bool>();
        cfg.dataset = std::move(ds);
    }
    if (sources != 1)
        throw std::runtime_error("load_config: exactly one instance source required");

    for (const auto& name : j.at("algorithms"))
        cfg.algorithms.push_back(algorithm_from_name(name.get<std::string>()));
    cfg.deltas = j.at("deltas").get<std::vector<double>>();
    cfg.trials = j.at("trials").get<int>();
    const std::string kind = j.at("threshold").get<std::string>();
    if (kind == "exact")
        cfg.threshold = ThresholdKind::exact;
    else if (kind == "heuristic")
        cfg.threshold = ThresholdKind::heuristic;
    else
        throw std::runtime_error("load_config: threshold must be exact or heuristic");
    cfg.base_seed = j.at("seed").get<std::uint64_t>();
    cfg.max_steps = j.at("max_steps").get<long long>();
    if (j.contains("parallelism")) cfg.parallelism = j.at("parallelism").get<int>();
    if (j.contains("warm_start")) cfg.warm_start = j.at("warm_start").get<bool>();
    cfg.trials_path = j.at("output").at("trials").get<std::string>();
    cfg.summary_path = j.at("output").at("summary").get<std::string>();

    if (cfg.trials < 1) throw std::runtime_error("load_config: trials must be >= 1");
    if (cfg.algorithms.empty()) throw std::runtime_error("load_config: no algorithms listed");
    for (double delta : cfg.deltas)
        if (!(delta > 0.0 && delta < 1.0))
            throw std::runtime_error("load_config: every delta must lie in (0,1)");
    if (cfg.max_steps < 2) throw std::runtime_error("load_config: max_steps too small");
    return cfg;
}

namespace {

Instance resolve_instance(const ExperimentConfig& cfg) {
    if (cfg.inline_instance) return *cfg.inline_instance;
    if (cfg.instance_file) return read_instance_json(*cfg.instance_file);
    if (cfg.synthetic) return synthetic_instance(*cfg.synthetic);
    const DatasetSource& ds = *cfg.dataset;
    Instance raw = load_dataset(ds.path, ds.feature_count, ds.options);
    return rescale_to_hardness(raw, ds.target_dstar).instance;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records,
                                  const std::vector<Algorithm>& algorithms,
                                  const std::vector<double>& deltas, double d_star) {
    if (records.empty()) throw std::invalid_argument("summarize: empty record set");
    std::vector<SummaryRow> rows;
    for (double delta : deltas) {
        for (Algorithm alg : algorithms) {
            SummaryRow row;
            row.algorithm = alg;
            row.delta = delta;
            row.lower_bound = lower_bound(delta, d_star);
            double sum = 0.0;
            long long n_terminated = 0;
            for (const auto& r : records) {
                if (r.algorithm != alg || r.delta != delta) continue;
                ++row.trials;
                if (!r.terminated) {
                    ++row.nonterminated;
                    continue;
                }
                if (!r.correct) ++row.errors;
                sum += static_cast<double>(r.tau);
                ++n_terminated;
            }
            if (n_terminated > 0) {
                row.mean_tau = sum / static_cast<double>(n_terminated);
                double sq = 0.0;
                for (const auto& r : records) {
                    if (r.algorithm != alg || r.delta != delta || !r.terminated) continue;
                    const double dev = static_cast<double>(r.tau) - row.mean_tau;
                    sq += dev * dev;
                }
                row.std_tau = n_terminated > 1
                                  ? std::sqrt(sq / static_cast<double>(n_terminated - 1))
                                  : 0.0;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult result;
    result.instance = resolve_instance(cfg);
    {
        const auto violations = validate_instance(result.instance, true);
        if (!violations.empty())
            throw std::runtime_error("run_experiment: instance invalid: " + violations.front());
    }

    const HardnessSolution hardness = solve_dstar(result.instance);
    result.d_star = hardness.d_star;

    TrialOptions trial_opts;
    trial_opts.max_steps = cfg.max_steps;
    trial_opts.warm_start = cfg.warm_start.value_or(result.instance.num_arms() > 200);

    struct Task {
        Algorithm algorithm;
        double delta;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (std::size_t di = 0; di < cfg.deltas.size(); ++di)
        for (Algorithm alg : cfg.algorithms)
            for (int i = 0; i < cfg.trials; ++i)
                tasks.push_back({alg, cfg.deltas[di],
                                 cfg.base_seed + di * static_cast<std::uint64_t>(cfg.trials) + i});

    result.records.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        std::min<std::size_t>(cfg.parallelism > 0 ? cfg.parallelism : hw, tasks.size());

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size() || failed.load()) return;
            try {
                result.records[i] =
                    run_trial(result.instance, tasks[i].algorithm, tasks[i].delta, cfg.threshold,
                              tasks[i].seed, trial_opts, &hardness.lambda_star);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                error_message = e.what();
                failed.store(true);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned w = 0; w + 1 < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failed.load()) throw std::runtime_error("run_experiment: trial failed: " + error_message);

    result.summary = summarize(result.records, cfg.algorithms, cfg.deltas, result.d_star);
    for (const auto& row : result.summary)
        if (row.errors == row.trials && row.trials > 0)
            std::cerr << "warning: all trials erred for " << algorithm_name(row.algorithm)
                      << " at delta=" << row.delta << "\n";
    return result;
}

void emit(const std::vector<TrialRecord>& records, const std::vector<SummaryRow>& summary,
          const std::string& trials_path, const std::string& summary_path) {
    {
        std::ofstream out(trials_path);
        if (!out) throw std::runtime_error("emit: cannot open " + trials_path);
        for (const auto& r : records) {
            nlohmann::json j{{"algorithm", algorithm_name(r.algorithm)},
                             {"delta", r.delta},
                             {"seed", r.seed},
                             {"tau", r.tau},
                             {"correct", r.correct},
                             {"wall_ms", r.wall_ms}};
            if (!r.terminated) j["terminated"] = false;
            out << j.dump() << "\n";
        }
        if (!out) throw std::runtime_error("emit: failed writing " + trials_path);
    }
    std::ofstream out(summary_path);
    if (!out) throw std::runtime_error("emit: cannot open " + summary_path);
    out << "algorithm,delta,trials,mean_tau,std_tau,errors,nonterminated,lower_bound\n";
    out.precision(10);
    for (const auto& row : summary)
        out << algorithm_name(row.algorithm) << ',' << row.delta << ',' << row.trials << ','
            << row.mean_tau << ',' << row.std_tau << ',' << row.errors << ','
            << row.nonterminated << ',' << row.lower_bound << "\n";
    if (!out) throw std::runtime_error("emit: failed writing " + summary_path);
}

}  // namespace boc
