// Command-line front end: run experiments, solve instance hardness, prepare
// dataset-backed instances, and run the built-in verification battery.
#include <cmath>
#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "boc/harness.hpp"

namespace {

int cmd_run(const std::string& config_path) {
    const boc::ExperimentConfig cfg = boc::load_config(config_path);
    const boc::ExperimentResult result = boc::run_experiment(cfg);
    boc::emit(result.records, result.summary, cfg.trials_path, cfg.summary_path);

    std::cout << "instance: M=" << result.instance.num_arms()
              << " K=" << result.instance.num_clusters() << " d=" << result.instance.dim()
              << "  D*=" << result.d_star << "\n";
    std::cout << "algorithm,delta,trials,mean_tau,std_tau,errors,nonterminated,lower_bound\n";
    int nonterminated = 0;
    for (const auto& row : result.summary) {
        std::cout << boc::algorithm_name(row.algorithm) << ',' << row.delta << ',' << row.trials
                  << ',' << row.mean_tau << ',' << row.std_tau << ',' << row.errors << ','
                  << row.nonterminated << ',' << row.lower_bound << "\n";
        nonterminated += row.nonterminated;
    }
    return nonterminated == 0 ? 0 : 1;
}

int cmd_hardness(const std::string& instance_path) {
    const boc::Instance inst = boc::read_instance_json(instance_path);
    const boc::HardnessSolution sol = boc::solve_dstar(inst);
    nlohmann::json j{{"d_star", sol.d_star},
                     {"w_star", sol.w_star.values},
                     {"lambda_star", sol.lambda_star.values},
                     {"iterations", sol.iterations},
                     {"gap", sol.gap}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_prepare(const std::string& dataset_path, int d, double target, const std::string& out_path,
                char delimiter, bool skip_header) {
    boc::DatasetOptions opts;
    opts.delimiter = delimiter;
    opts.skip_header = skip_header;
    const boc::Instance raw = boc::load_dataset(dataset_path, d, opts);
    const boc::RescaleResult rescaled = boc::rescale_to_hardness(raw, target);
    boc::write_instance_json(out_path, rescaled.instance);

    const double check = boc::solve_dstar(rescaled.instance).d_star;
    std::cout << "M=" << raw.num_arms() << " K=" << raw.num_clusters() << " d=" << raw.dim()
              << " scale=" << rescaled.scale << " d_star=" << check << " -> " << out_path << "\n";
    return 0;
}

// ---- verify: the dataset-free oracle and property battery ----------------

bool report(const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    return ok;
}

boc::Instance random_admissible_instance(std::mt19937_64& rng, int max_m, int max_k, int max_d,
                                         double min_gap) {
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
        for (int i = 0; i < k; ++i) inst.partition.labels[i] = i + 1;  // keep clusters nonempty
        std::uniform_int_distribution<int> pick_label(1, k);
        for (int i = k; i < m; ++i) inst.partition.labels[i] = pick_label(rng);
        inst.centers.assign(k, boc::Vec(d));
        for (auto& c : inst.centers)
            for (double& x : c) x = coord(rng);
        if (std::sqrt(boc::min_pairwise_sq_dist(inst.centers)) > min_gap) return inst;
    }
}

int cmd_verify() {
    std::mt19937_64 rng(20240817);
    bool all_ok = true;

    {  // closed form vs both enumerators on random instances
        std::uniform_real_distribution<double> weight(0.05, 1.0);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const auto inst = random_admissible_instance(rng, 8, 3, 3, 0.3);
            std::vector<double> weights(inst.num_arms());
            for (double& w : weights) w = weight(rng);
            const double closed = boc::alt_inf_closed_form(inst.partition, inst.centers, weights);
            const double hamming1 =
                boc::brute_force_alt_inf(inst.partition, inst.centers, weights).value;
            std::vector<boc::Vec> ref(inst.num_arms());
            for (int a = 0; a < inst.num_arms(); ++a) ref[a] = inst.arm_mean(a);
            const double exhaustive =
                boc::brute_force_all_partitions(ref, weights, inst.partition,
                                                inst.num_clusters()).value;
            worst = std::max(worst, std::abs(closed - hamming1) / closed);
            worst = std::max(worst, std::abs(closed - exhaustive) / closed);
        }
        all_ok &= report("closed form = Hamming-1 enumeration = all-partitions enumeration",
                         worst <= 1e-9, "max rel diff " + std::to_string(worst));
    }

    {  // analytic two-cluster instance
        boc::Instance inst{{{1, 1, 2}, 2}, {{0.0}, {1.0}}};
        const auto sol = boc::solve_dstar(inst);
        const double expect = 2.0 * (3.0 + 2.0 * std::sqrt(2.0));
        const bool ok = std::abs(sol.d_star - expect) <= 1e-6 &&
                        std::abs(sol.lambda_star.values[0] - 0.2928932188134525) <= 1e-6 &&
                        std::abs(sol.lambda_star.values[2] - 0.4142135623730951) <= 1e-6;
        all_ok &= report("analytic D* and lambda*", ok, "D*=" + std::to_string(sol.d_star));
    }

    {  // the Hamming-2 counterexample
        const std::vector<boc::Vec> ref{{0.0, 0.0}, {0.8, 0.0}, {0.0, 1.0}, {0.8, 1.0}};
        const std::vector<double> unit(4, 1.0);
        const boc::Partition excluded{{1, 1, 2, 2}, 2};
        const auto best = boc::brute_force_all_partitions(ref, unit, excluded, 2);
        const bool ok = std::abs(best.value - 1.0) <= 1e-12 &&
                        boc::partitions_equivalent(best.partition, boc::Partition{{1, 2, 1, 2}, 2}) &&
                        boc::hamming_distance(best.partition, excluded) == 2;
        all_ok &= report("most confusing alternative at Hamming distance 2", ok,
                         "value " + std::to_string(best.value));
    }

    {  // zeta and Psi
        const double z2 = boc::riemann_zeta(2.0);
        bool ok = std::abs(z2 - 1.6449340668482264) <= 1e-10;
        for (double x = 0.1; x <= 1e4; x *= 10.0) ok &= boc::psi(x) >= x;
        // large-x expansion: Psi(x) = x + log(x)/2 + 0.5717... + o(1)
        ok &= std::abs(boc::psi(1e4) - 1e4 - 0.5 * std::log(1e4) - 0.5717) <= 1e-2;
        all_ok &= report("zeta(2) and Psi properties", ok);
    }

    {  // variational identity for the stopping statistic
        std::uniform_real_distribution<double> log_z(-3.0, 3.0);
        double worst = 0.0;
        for (int trial = 0; trial < 1000; ++trial) {
            const double z1 = std::pow(10.0, log_z(rng));
            const double z2 = z1 * std::pow(10.0, log_z(rng));
            const double diff = std::sqrt(z2) - std::sqrt(z1);
            const double closed = diff > 0 ? 0.5 * diff * diff : 0.0;
            double grid = 0.0;
            for (double alpha = 1e-3; alpha <= 1e3; alpha *= 1.00462) {
                grid = std::max(grid, 0.5 * (-alpha * z1 + alpha / (alpha + 1.0) * z2));
            }
            if (closed > 0) worst = std::max(worst, std::abs(closed - grid) / closed);
        }
        all_ok &= report("stopping statistic matches its variational form", worst <= 1e-4,
                         "max rel diff " + std::to_string(worst));
    }

    {  // K-means recovery under small perturbations
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        int recovered = 0;
        const int trials = 100;
        for (int trial = 0; trial < trials; ++trial) {
            const auto inst = random_admissible_instance(rng, 10, 4, 3, 0.4);
            const double gap = std::sqrt(boc::min_pairwise_sq_dist(inst.centers));
            std::vector<boc::Vec> est(inst.num_arms());
            for (int a = 0; a < inst.num_arms(); ++a) {
                est[a] = inst.arm_mean(a);
                boc::Vec dir(inst.dim());
                double norm = 0.0;
                for (double& x : dir) {
                    x = gauss(rng);
                    norm += x * x;
                }
                norm = std::sqrt(norm);
                const double radius = 0.99 * unit(rng) * gap / 4.0;
                for (int j = 0; j < inst.dim(); ++j) est[a][j] += dir[j] / norm * radius;
            }
            std::vector<double> weights(inst.num_arms());
            for (double& w : weights) w = 1.0 + unit(rng);
            const auto result = boc::weighted_kmeans(est, weights, inst.num_clusters());
            if (boc::partitions_equivalent(result.partition, inst.partition)) ++recovered;
        }
        all_ok &= report("K-means recovery inside the gap/4 region",
                         recovered == trials,
                         std::to_string(recovered) + "/" + std::to_string(trials));
    }

    std::cout << (all_ok ? "verify: all checks passed\n" : "verify: FAILURES present\n");
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"online clustering with bandit feedback"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("--config", config_path, "experiment config (JSON)")->required();

    std::string instance_path;
    auto* hardness = app.add_subcommand("hardness", "solve D*, w*, lambda* for an instance");
    hardness->add_option("--instance", instance_path, "instance file (JSON)")->required();

    std::string dataset_path, out_path;
    int feature_count = 0;
    double target = 2.0;
    std::string delimiter = ",";
    bool skip_header = false;
    auto* prepare = app.add_subcommand("prepare", "build an instance from a dataset and rescale it");
    prepare->add_option("--dataset", dataset_path, "delimiter-separated dataset")->required();
    prepare->add_option("--d", feature_count, "number of feature columns")->required();
    prepare->add_option("--target-dstar", target, "hardness parameter after rescaling")->required();
    prepare->add_option("--out", out_path, "output instance file (JSON)")->required();
    prepare->add_option("--delimiter", delimiter, "field delimiter (default ','; ' ' = whitespace)");
    prepare->add_flag("--skip-header", skip_header, "skip the first line");

    auto* verify = app.add_subcommand("verify", "run the dataset-free oracle/property battery");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path);
        if (hardness->parsed()) return cmd_hardness(instance_path);
        if (prepare->parsed())
            return cmd_prepare(dataset_path, feature_count, target, out_path, delimiter.at(0),
                               skip_header);
        if (verify->parsed()) return cmd_verify();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
