#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "boc/harness.hpp"

using namespace boc;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/boc_harness_") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

std::string config_json(const std::string& extra = "") {
    return std::string(R"({
        "instance": {"synthetic": "easy"},
        "algorithms": ["boc", "uniform"],
        "deltas": [0.1],
        "trials": 4,
        "threshold": "heuristic",
        "seed": 100,
        "max_steps": 100000,
        "output": {"trials": "/tmp/boc_harness_trials.jsonl",
                   "summary": "/tmp/boc_harness_summary.csv"})") +
           extra + "\n}";
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("load_config") {
    const auto path = write_temp("cfg.json", config_json());
    const ExperimentConfig cfg = load_config(path);
    CHECK(cfg.synthetic == SyntheticKind::easy);
    CHECK(cfg.algorithms == std::vector<Algorithm>{Algorithm::boc, Algorithm::uniform});
    CHECK(cfg.deltas == std::vector<double>{0.1});
    CHECK(cfg.trials == 4);
    CHECK(cfg.threshold == ThresholdKind::heuristic);
    CHECK(cfg.base_seed == 100);
    CHECK(cfg.max_steps == 100000);
    CHECK_FALSE(cfg.warm_start.has_value());
    CHECK(cfg.parallelism == 0);

    SUBCASE("rejects malformed configs") {
        CHECK_THROWS_AS(load_config("/nonexistent.json"), std::runtime_error);
        const auto no_source = write_temp("bad1.json", R"({
            "instance": {},
            "algorithms": ["boc"], "deltas": [0.1], "trials": 1,
            "threshold": "heuristic", "seed": 1, "max_steps": 100,
            "output": {"trials": "/tmp/t", "summary": "/tmp/s"}})");
        CHECK_THROWS_AS(load_config(no_source), std::runtime_error);
        const auto bad_delta = write_temp("bad2.json", config_json());
        {
            std::string text = config_json();
            auto at = text.find("[0.1]");
            text.replace(at, 5, "[1.5]");
            std::ofstream(bad_delta) << text;
        }
        CHECK_THROWS_AS(load_config(bad_delta), std::runtime_error);
        const auto bad_algorithm = write_temp("bad3.json", [] {
            std::string text = config_json();
            auto at = text.find("\"uniform\"");
            text.replace(at, 9, "\"spectral\"");
            return text;
        }());
        CHECK_THROWS_AS(load_config(bad_algorithm), std::invalid_argument);
    }
}

TEST_CASE("summarize") {
    std::vector<TrialRecord> records;
    TrialRecord r;
    r.algorithm = Algorithm::boc;
    r.delta = 0.5;
    r.terminated = true;
    r.correct = true;
    r.tau = 10;
    records.push_back(r);
    r.tau = 12;
    records.push_back(r);

    const auto rows = summarize(records, {Algorithm::boc}, {0.5}, 2.0);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].trials == 2);
    CHECK(rows[0].mean_tau == doctest::Approx(11.0));
    CHECK(rows[0].std_tau == doctest::Approx(std::sqrt(2.0)));  // sample std, divisor n-1
    CHECK(rows[0].errors == 0);
    CHECK(rows[0].lower_bound == doctest::Approx(0.0));  // d_KL(1/2, 1/2) = 0

    SUBCASE("single trial reports zero std") {
        const auto one = summarize({records[0]}, {Algorithm::boc}, {0.5}, 2.0);
        CHECK(one[0].std_tau == 0.0);
        CHECK(one[0].mean_tau == doctest::Approx(10.0));
    }
    SUBCASE("all-error cells are counted") {
        for (auto& rec : records) rec.correct = false;
        const auto rows2 = summarize(records, {Algorithm::boc}, {0.5}, 2.0);
        CHECK(rows2[0].errors == rows2[0].trials);
    }
    SUBCASE("aggregation is order-independent") {
        std::vector<TrialRecord> more = records;
        r.algorithm = Algorithm::uniform;
        r.tau = 30;
        more.push_back(r);
        r.tau = 40;
        more.push_back(r);
        auto shuffled = more;
        std::mt19937_64 rng(1);
        for (int i = 0; i < 5; ++i) {
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            const auto a = summarize(more, {Algorithm::boc, Algorithm::uniform}, {0.5}, 2.0);
            const auto b = summarize(shuffled, {Algorithm::boc, Algorithm::uniform}, {0.5}, 2.0);
            REQUIRE(a.size() == b.size());
            for (std::size_t i2 = 0; i2 < a.size(); ++i2) {
                CHECK(a[i2].mean_tau == b[i2].mean_tau);
                CHECK(a[i2].std_tau == b[i2].std_tau);
                CHECK(a[i2].errors == b[i2].errors);
            }
        }
    }
    SUBCASE("nonterminated trials are excluded from the mean") {
        r.algorithm = Algorithm::boc;
        r.delta = 0.5;
        r.terminated = false;
        r.tau = 99999;
        records.push_back(r);
        const auto rows3 = summarize(records, {Algorithm::boc}, {0.5}, 2.0);
        CHECK(rows3[0].nonterminated == 1);
        CHECK(rows3[0].mean_tau == doctest::Approx(11.0));
        CHECK(rows3[0].trials == 3);
    }
    SUBCASE("empty record set is an error") {
        CHECK_THROWS_AS(summarize({}, {Algorithm::boc}, {0.5}, 2.0), std::invalid_argument);
    }
}

TEST_CASE("emit output formats") {
    std::vector<TrialRecord> records(3);
    for (int i = 0; i < 3; ++i) {
        records[i].algorithm = Algorithm::boc;
        records[i].delta = 0.1;
        records[i].seed = 100 + i;
        records[i].tau = 50 + i;
        records[i].correct = true;
        records[i].terminated = true;
        records[i].wall_ms = 1.5;
    }
    const auto rows = summarize(records, {Algorithm::boc}, {0.1}, 2.0);
    const std::string trials_path = "/tmp/boc_harness_emit.jsonl";
    const std::string summary_path = "/tmp/boc_harness_emit.csv";
    emit(records, rows, trials_path, summary_path);

    std::ifstream trials(trials_path);
    std::string line;
    int lines = 0;
    while (std::getline(trials, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 3);

    std::ifstream summary(summary_path);
    std::getline(summary, line);
    CHECK(line == "algorithm,delta,trials,mean_tau,std_tau,errors,nonterminated,lower_bound");
    std::getline(summary, line);
    CHECK(line.substr(0, 4) == "boc,");

    CHECK_THROWS_AS(emit(records, rows, "/nonexistent_dir/x.jsonl", summary_path),
                    std::runtime_error);
}

TEST_CASE("run_experiment end to end") {
    const auto path = write_temp("cfg_run.json", config_json());
    const ExperimentConfig cfg = load_config(path);
    const ExperimentResult serial = [&] {
        ExperimentConfig serial_cfg = cfg;
        serial_cfg.parallelism = 1;
        return run_experiment(serial_cfg);
    }();

    CHECK(serial.records.size() == 8);  // 2 algorithms x 1 delta x 4 trials
    CHECK(serial.d_star == doctest::Approx(0.6327).epsilon(1e-3));
    for (const auto& record : serial.records) {
        CHECK(record.terminated);
        CHECK(record.correct);
    }

    SUBCASE("parallel run produces identical records apart from wall time") {
        ExperimentConfig parallel_cfg = cfg;
        parallel_cfg.parallelism = 4;
        const ExperimentResult parallel = run_experiment(parallel_cfg);
        REQUIRE(parallel.records.size() == serial.records.size());
        for (std::size_t i = 0; i < serial.records.size(); ++i) {
            CHECK(parallel.records[i].algorithm == serial.records[i].algorithm);
            CHECK(parallel.records[i].seed == serial.records[i].seed);
            CHECK(parallel.records[i].tau == serial.records[i].tau);
            CHECK(parallel.records[i].correct == serial.records[i].correct);
        }
    }
    SUBCASE("seeds are shared across algorithms within a delta") {
        // boc trials come first, uniform second; both use base + 0..3
        for (int i = 0; i < 4; ++i) {
            CHECK(serial.records[i].seed == 100 + i);
            CHECK(serial.records[4 + i].seed == 100 + i);
        }
    }
    SUBCASE("error fraction respects the PAC bound") {
        int errors = 0;
        for (const auto& record : serial.records)
            if (record.terminated && !record.correct) ++errors;
        const double fraction = static_cast<double>(errors) / serial.records.size();
        CHECK(fraction <= 0.1 + 3.0 * std::sqrt(0.1 * 0.9 / serial.records.size()));
    }
}

}  // TEST_SUITE
