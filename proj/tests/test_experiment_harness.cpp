#include "doctest.h"

#include "pod/errors.hpp"
#include "pod/experiment_harness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace pod;

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("pod_harness_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("summarize") {
    const std::vector<std::optional<double>> one{4.0};
    const Summary s1 = summarize(one);
    CHECK(*s1.mean == 4.0);
    CHECK(*s1.stddev == 0.0);

    const std::vector<std::optional<double>> mixed{1.0, std::nullopt, 3.0, 5.0};
    const Summary s = summarize(mixed);
    CHECK(*s.mean == doctest::Approx(3.0));
    CHECK(*s.stddev == doctest::Approx(2.0));  // sample standard deviation
    CHECK(s.count == 3);
    CHECK(s.excluded == 1);

    const std::vector<std::optional<double>> none{std::nullopt};
    CHECK_FALSE(summarize(none).mean.has_value());
}

TEST_CASE("metrics follow the iteration-row convention") {
    PodConfig cfg;
    cfg.seed = 2;
    const PodResult result = run_pod(cfg);
    const RunMetrics m = compute_metrics(result);
    REQUIRE(m.phases.size() == 6);
    CHECK_FALSE(m.phases[0].new_options.has_value());
    CHECK_FALSE(m.phases[0].avg_option_length.has_value());
    for (std::size_t k = 1; k < 6; ++k) {
        CHECK(*m.phases[k].new_options == result.discovered_per_phase[k - 1]);
        CHECK(m.phases[k].max_dist_from_start >= 0);
        CHECK(m.phases[k].max_dist_from_start <= 2048);
    }
}

TEST_CASE("a single run reports its own metrics with zero spread") {
    PodConfig cfg;
    cfg.iterations = 3;
    const AggregateReport report = run_experiment(cfg, 1, 5);
    PodConfig single = cfg;
    single.seed = 5;
    const RunMetrics m = compute_metrics(run_pod(single));
    REQUIRE(report.phases.size() == 3);
    CHECK(report.runs == 1);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(*report.phases[k].max_dist_from_start.mean == double(m.phases[k].max_dist_from_start));
        CHECK(*report.phases[k].max_dist_from_start.stddev == 0.0);
    }
    CHECK(*report.phases[1].new_options.mean == double(*m.phases[1].new_options));
    CHECK_THROWS_AS(run_experiment(cfg, 0, 0), ContractViolation);
}

TEST_CASE("aggregation does not depend on seed order or worker count") {
    PodConfig cfg;
    cfg.iterations = 3;
    const AggregateReport serial = run_experiment(cfg, 6, 100, 1);
    const AggregateReport parallel = run_experiment(cfg, 6, 100, 3);
    CHECK(to_json(serial).dump() == to_json(parallel).dump());

    std::vector<RunMetrics> reversed = serial.per_run;
    std::reverse(reversed.begin(), reversed.end());
    const AggregateReport flipped = aggregate(cfg, 100, reversed);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(*flipped.phases[k].max_dist_from_start.mean ==
              doctest::Approx(*serial.phases[k].max_dist_from_start.mean).epsilon(1e-12));
        CHECK(*flipped.phases[k].max_dist_from_start.stddev ==
              doctest::Approx(*serial.phases[k].max_dist_from_start.stddev).epsilon(1e-12));
    }
}

TEST_CASE("trajectory csv") {
    const auto dir = scratch("trajectory");
    PodConfig cfg;
    cfg.seed = 7;

    SUBCASE("one phase of 1000 steps") {
        cfg.iterations = 1;
        emit_trajectory(run_pod(cfg), dir / "one.csv");
        const auto lines = read_lines(dir / "one.csv");
        CHECK(lines.size() == 1001);
        CHECK(lines[0] == "run,phase,t,position,choice_kind,option_id");
    }
    SUBCASE("control run has no option ids") {
        cfg.options_enabled = false;
        emit_trajectory(run_pod(cfg), dir / "control.csv");
        const auto lines = read_lines(dir / "control.csv");
        CHECK(lines.size() == 6001);
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto f = split(lines[i]);
            REQUIRE(f.size() == 6);
            CHECK(f[4] == "primitive");
            CHECK(f[5].empty());
        }
    }
    SUBCASE("six phases") {
        emit_trajectory(run_pod(cfg), dir / "full.csv");
        const auto lines = read_lines(dir / "full.csv");
        REQUIRE(lines.size() == 6001);
        std::set<std::string> phases;
        bool saw_option = false;
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto f = split(lines[i]);
            REQUIRE(f.size() == 6);
            CHECK(f[0] == "7");
            CHECK(std::stoul(f[2]) == i - 1);
            CHECK(std::stoul(f[1]) == (i - 1) / 1000);
            phases.insert(f[1]);
            if (f[4] == "option") {
                saw_option = true;
                CHECK_FALSE(f[5].empty());
            }
        }
        CHECK(phases.size() == 6);
        CHECK(saw_option);
    }
    CHECK_THROWS_AS(emit_trajectory(run_pod(cfg), "/nonexistent_dir/t.csv"), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("table and report outputs") {
    const auto dir = scratch("outputs");
    PodConfig cfg;
    cfg.iterations = 2;
    const AggregateReport report = run_experiment(cfg, 3, 0);
    write_table_csv(report, dir / "table1.csv");
    write_report_json(report, dir / "report.json");

    const auto lines = read_lines(dir / "table1.csv");
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "metric,iter0_mean,iter0_std,iter1_mean,iter1_std");
    CHECK(lines[1].rfind("num_options_discovered,-,-,", 0) == 0);
    CHECK(lines[2].rfind("avg_option_length,-,-,", 0) == 0);
    CHECK(lines[3].rfind("max_dist_from_start,", 0) == 0);

    std::ifstream in(dir / "report.json");
    const nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j["runs"] == 3);
    CHECK(j["phases"].size() == 2);
    CHECK(j["phases"][0]["new_options"]["mean"].is_null());
    CHECK(j["phases"][1]["avg_option_length"].contains("excluded"));
    CHECK(j["per_run"].size() == 3);
    CHECK(j["config"]["observability"] == "full");
    std::filesystem::remove_all(dir);
}

TEST_CASE("json config overlay") {
    ExperimentConfig cfg;
    apply_json(cfg, nlohmann::json{{"ring_length", 256}, {"observability", "partial"}, {"runs", 4}});
    CHECK(cfg.pod.bits == 8);
    CHECK(cfg.pod.mode == ObservabilityMode::Partial);
    CHECK(cfg.runs == 4);
    CHECK(cfg.pod.kappa == 1.0);

    CHECK_THROWS_AS(apply_json(cfg, nlohmann::json{{"ring_length", 100}}), ContractViolation);
    CHECK_THROWS_AS(apply_json(cfg, nlohmann::json{{"ring_length", 256}, {"bits", 12}}),
                    ContractViolation);
    CHECK_THROWS_AS(apply_json(cfg, nlohmann::json{{"colour", "red"}}), ContractViolation);
    CHECK_THROWS_AS(apply_json(cfg, nlohmann::json{{"kappa", "high"}}), ContractViolation);

    const auto dir = scratch("config");
    std::ofstream(dir / "c.json") << R"({"bits": 10, "gamma": 0.9, "steps": 50})";
    const ExperimentConfig loaded = load_config(dir / "c.json");
    CHECK(loaded.pod.bits == 10);
    CHECK(loaded.pod.gamma == 0.9);
    CHECK(loaded.pod.steps == 50);
    CHECK_THROWS_AS(load_config(dir / "missing.json"), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("run_and_write produces every artifact") {
    const auto dir = scratch("run");
    ExperimentConfig cfg;
    cfg.runs = 2;
    cfg.pod.iterations = 2;
    cfg.pod.seed = 3;
    run_and_write(cfg, dir);
    for (const char* name : {"table1.csv", "report.json", "trajectory_3.csv", "trajectory_3_control.csv",
                             "purposes_phase0.csv", "purposes_phase1.csv"})
        CHECK(std::filesystem::exists(dir / name));
    const auto purposes = read_lines(dir / "purposes_phase0.csv");
    REQUIRE(purposes.size() > 1);
    CHECK(purposes[0] == "sign,sigma,v_0,v_1,v_2,v_3,v_4,v_5,v_6,v_7,v_8,v_9,v_10,v_11");
    std::filesystem::remove_all(dir);
}
