#pragma once

#include "pod/pod_driver.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace pod {

// Metrics for one collection phase, using the iteration-row convention of the
// results table: new_options at phase k counts options extracted from phase
// k-1's data (undefined at phase 0); the other two are measured in phase k.
struct PhaseMetrics {
    int phase = 0;
    std::optional<std::size_t> new_options;
    std::optional<double> avg_option_length;  // null when no option was executed
    std::size_t option_executions = 0;
    std::int64_t max_dist_from_start = 0;
};

struct RunMetrics {
    std::uint64_t seed = 0;
    std::vector<PhaseMetrics> phases;
};

RunMetrics compute_metrics(const PodResult& result);

// Mean and sample standard deviation over the runs where the value is defined.
struct Summary {
    std::optional<double> mean;
    std::optional<double> stddev;
    std::size_t count = 0;     // runs contributing
    std::size_t excluded = 0;  // runs where the value was undefined
};

// Deterministic reduction in the given order; a single value has stddev 0.
Summary summarize(std::span<const std::optional<double>> values);

struct PhaseAggregate {
    int phase = 0;
    Summary new_options;
    Summary avg_option_length;
    Summary max_dist_from_start;
};

struct AggregateReport {
    PodConfig config;
    std::uint64_t base_seed = 0;
    std::size_t runs = 0;
    std::vector<PhaseAggregate> phases;
    std::vector<RunMetrics> per_run;  // seed order
};

AggregateReport aggregate(const PodConfig& cfg, std::uint64_t base_seed,
                          std::span<const RunMetrics> runs);

// Runs run_pod for seeds base_seed .. base_seed + runs - 1 on up to
// `workers` threads and aggregates in seed order.
AggregateReport run_experiment(const PodConfig& cfg, std::size_t runs, std::uint64_t base_seed,
                               std::size_t workers = 1);

nlohmann::json to_json(const AggregateReport& report);
nlohmann::json to_json(const PodConfig& cfg);

// Rows are metrics, columns iteration mean/std pairs; "-" marks undefined cells.
void write_table_csv(const AggregateReport& report, const std::filesystem::path& path);
void write_report_json(const AggregateReport& report, const std::filesystem::path& path);

// Columns: run, phase, t, position, choice_kind, option_id. One row per
// primitive step; t counts steps from the start of the run.
void emit_trajectory(const PodResult& result, const std::filesystem::path& path);

// Everything a CLI invocation needs: POD parameters plus experiment size.
struct ExperimentConfig {
    PodConfig pod;
    std::size_t runs = 30;
    std::size_t workers = 1;
};

// Overlays keys present in `j` onto `cfg`. Accepted keys: ring_length, bits,
// observability, kappa, gamma, vi_sweeps, iterations, steps, runs, seed,
// workers. Unknown keys are rejected.
void apply_json(ExperimentConfig& cfg, const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

// Writes table1.csv, report.json and the base-seed run's trajectory,
// primitive-only control trajectory and per-phase purpose dumps into `dir`.
AggregateReport run_and_write(const ExperimentConfig& cfg, const std::filesystem::path& dir);

}  // namespace pod
