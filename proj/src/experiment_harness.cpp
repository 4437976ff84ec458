#include "pod/experiment_harness.hpp"

#include "pod/errors.hpp"

#include <fmt/format.h>

#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <string>
#include <thread>

namespace pod {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError(path.string(), "write failed");
}

nlohmann::json summary_json(const Summary& s) {
    nlohmann::json j;
    j["mean"] = s.mean ? nlohmann::json(*s.mean) : nlohmann::json(nullptr);
    j["std"] = s.stddev ? nlohmann::json(*s.stddev) : nlohmann::json(nullptr);
    j["count"] = s.count;
    j["excluded"] = s.excluded;
    return j;
}

std::string cell(const std::optional<double>& v) {
    return v ? fmt::format("{:.3f}", *v) : std::string("-");
}

int bits_for_length(std::int64_t length) {
    if (length < 2 || !std::has_single_bit(static_cast<std::uint64_t>(length)))
        throw ContractViolation("ring length must be a power of two, got " +
                                std::to_string(length));
    return std::countr_zero(static_cast<std::uint64_t>(length));
}

}  // namespace

RunMetrics compute_metrics(const PodResult& result) {
    const RingEnv env(result.config.bits);
    RunMetrics m;
    m.seed = result.config.seed;
    for (std::size_t k = 0; k < result.traces.size(); ++k) {
        const PhaseTrace& trace = result.traces[k];
        PhaseMetrics pm;
        pm.phase = trace.phase;
        if (k > 0 && result.config.options_enabled)
            pm.new_options = result.discovered_per_phase[k - 1];
        pm.avg_option_length = trace.mean_option_length();
        pm.option_executions = trace.invocations.size();
        pm.max_dist_from_start = trace.max_distance_from_start(env);
        m.phases.push_back(pm);
    }
    return m;
}

Summary summarize(std::span<const std::optional<double>> values) {
    Summary s;
    double sum = 0.0;
    for (const auto& v : values) {
        if (!v) {
            ++s.excluded;
            continue;
        }
        sum += *v;
        ++s.count;
    }
    if (s.count == 0) return s;
    const double mean = sum / static_cast<double>(s.count);
    double sq = 0.0;
    for (const auto& v : values)
        if (v) sq += (*v - mean) * (*v - mean);
    s.mean = mean;
    s.stddev = s.count > 1 ? std::sqrt(sq / static_cast<double>(s.count - 1)) : 0.0;
    return s;
}

AggregateReport aggregate(const PodConfig& cfg, std::uint64_t base_seed,
                          std::span<const RunMetrics> runs) {
    AggregateReport report;
    report.config = cfg;
    report.base_seed = base_seed;
    report.runs = runs.size();
    report.per_run.assign(runs.begin(), runs.end());
    for (int k = 0; k < cfg.iterations; ++k) {
        std::vector<std::optional<double>> counts, lengths, dists;
        for (const RunMetrics& r : runs) {
            const PhaseMetrics& pm = r.phases.at(static_cast<std::size_t>(k));
            counts.push_back(pm.new_options ? std::optional<double>(static_cast<double>(*pm.new_options))
                                            : std::nullopt);
            lengths.push_back(pm.avg_option_length);
            dists.push_back(static_cast<double>(pm.max_dist_from_start));
        }
        report.phases.push_back({k, summarize(counts), summarize(lengths), summarize(dists)});
    }
    return report;
}

AggregateReport run_experiment(const PodConfig& cfg, std::size_t runs, std::uint64_t base_seed,
                               std::size_t workers) {
    if (runs < 1) throw ContractViolation("an experiment needs at least one run");
    cfg.validate();
    std::vector<RunMetrics> metrics(runs);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t i = next++; i < runs; i = next++) {
            try {
                PodConfig run_cfg = cfg;
                run_cfg.seed = base_seed + i;
                metrics[i] = compute_metrics(run_pod(run_cfg));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    const std::size_t n_threads = std::max<std::size_t>(1, std::min(workers, runs));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return aggregate(cfg, base_seed, metrics);
}

nlohmann::json to_json(const PodConfig& cfg) {
    return {
        {"ring_length", cfg.ring_length()},
        {"bits", cfg.bits},
        {"observability", std::string(to_string(cfg.mode))},
        {"kappa", cfg.kappa},
        {"gamma", cfg.gamma},
        {"vi_sweeps", cfg.vi_sweeps},
        {"iterations", cfg.iterations},
        {"steps", cfg.steps},
        {"options_enabled", cfg.options_enabled},
    };
}

nlohmann::json to_json(const AggregateReport& report) {
    nlohmann::json j;
    j["config"] = to_json(report.config);
    j["base_seed"] = report.base_seed;
    j["runs"] = report.runs;
    j["phases"] = nlohmann::json::array();
    for (const auto& p : report.phases) {
        j["phases"].push_back({
            {"phase", p.phase},
            {"new_options", summary_json(p.new_options)},
            {"avg_option_length", summary_json(p.avg_option_length)},
            {"max_dist_from_start", summary_json(p.max_dist_from_start)},
        });
    }
    j["per_run"] = nlohmann::json::array();
    for (const auto& r : report.per_run) {
        nlohmann::json run{{"seed", r.seed}, {"phases", nlohmann::json::array()}};
        for (const auto& pm : r.phases) {
            run["phases"].push_back({
                {"phase", pm.phase},
                {"new_options", pm.new_options ? nlohmann::json(*pm.new_options) : nlohmann::json(nullptr)},
                {"avg_option_length",
                 pm.avg_option_length ? nlohmann::json(*pm.avg_option_length) : nlohmann::json(nullptr)},
                {"option_executions", pm.option_executions},
                {"max_dist_from_start", pm.max_dist_from_start},
            });
        }
        j["per_run"].push_back(std::move(run));
    }
    return j;
}

void write_table_csv(const AggregateReport& report, const std::filesystem::path& path) {
    auto out = open_output(path);
    out << "metric";
    for (const auto& p : report.phases) out << ",iter" << p.phase << "_mean,iter" << p.phase << "_std";
    out << '\n';
    auto row = [&](const char* name, Summary PhaseAggregate::*field) {
        out << name;
        for (const auto& p : report.phases) {
            const Summary& s = p.*field;
            out << ',' << cell(s.mean) << ',' << cell(s.stddev);
        }
        out << '\n';
    };
    row("num_options_discovered", &PhaseAggregate::new_options);
    row("avg_option_length", &PhaseAggregate::avg_option_length);
    row("max_dist_from_start", &PhaseAggregate::max_dist_from_start);
    finish_output(out, path);
}

void write_report_json(const AggregateReport& report, const std::filesystem::path& path) {
    auto out = open_output(path);
    out << to_json(report).dump(2) << '\n';
    finish_output(out, path);
}

void emit_trajectory(const PodResult& result, const std::filesystem::path& path) {
    auto out = open_output(path);
    out << "run,phase,t,position,choice_kind,option_id\n";
    std::size_t t = 0;
    for (const PhaseTrace& trace : result.traces) {
        for (const StepRecord& step : trace.steps) {
            out << result.config.seed << ',' << trace.phase << ',' << t++ << ','
                << step.position.position << ',' << (step.option_id ? "option" : "primitive") << ',';
            if (step.option_id) out << *step.option_id;
            out << '\n';
        }
    }
    finish_output(out, path);
}

void apply_json(ExperimentConfig& cfg, const nlohmann::json& j) {
    static const std::set<std::string> known = {"ring_length", "bits",       "observability",
                                                "kappa",       "gamma",      "vi_sweeps",
                                                "iterations",  "steps",      "runs",
                                                "seed",        "workers"};
    if (!j.is_object()) throw ContractViolation("config must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!known.contains(key)) throw ContractViolation("unknown config key '" + key + "'");

    try {
        if (j.contains("bits")) cfg.pod.bits = j.at("bits").get<int>();
        if (j.contains("ring_length")) {
            const int bits = bits_for_length(j.at("ring_length").get<std::int64_t>());
            if (j.contains("bits") && bits != cfg.pod.bits)
                throw ContractViolation("ring_length and bits disagree");
            cfg.pod.bits = bits;
        }
        if (j.contains("observability"))
            cfg.pod.mode = parse_observability(j.at("observability").get<std::string>());
        if (j.contains("kappa")) cfg.pod.kappa = j.at("kappa").get<double>();
        if (j.contains("gamma")) cfg.pod.gamma = j.at("gamma").get<double>();
        if (j.contains("vi_sweeps")) cfg.pod.vi_sweeps = j.at("vi_sweeps").get<int>();
        if (j.contains("iterations")) cfg.pod.iterations = j.at("iterations").get<int>();
        if (j.contains("steps")) cfg.pod.steps = j.at("steps").get<std::size_t>();
        if (j.contains("seed")) cfg.pod.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("runs")) cfg.runs = j.at("runs").get<std::size_t>();
        if (j.contains("workers")) cfg.workers = j.at("workers").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ContractViolation(std::string("bad config value: ") + e.what());
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open config");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string(), e.what());
    }
    ExperimentConfig cfg;
    apply_json(cfg, j);
    return cfg;
}

AggregateReport run_and_write(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError(dir.string(), ec.message());

    const std::uint64_t base_seed = cfg.pod.seed;
    AggregateReport report = run_experiment(cfg.pod, cfg.runs, base_seed, cfg.workers);
    write_table_csv(report, dir / "table1.csv");
    write_report_json(report, dir / "report.json");

    const PodResult sample = run_pod(cfg.pod);
    emit_trajectory(sample, dir / fmt::format("trajectory_{}.csv", base_seed));
    for (std::size_t k = 0; k < sample.purposes.size(); ++k)
        write_purposes_csv(dir / fmt::format("purposes_phase{}.csv", k), sample.purposes[k]);

    PodConfig control = cfg.pod;
    control.options_enabled = false;
    emit_trajectory(run_pod(control), dir / fmt::format("trajectory_{}_control.csv", base_seed));
    return report;
}

}  // namespace pod
