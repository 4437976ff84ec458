// Command-line front end: multi-seed experiments, single-run traces and the
// numerical verification suite.

#include "pod/errors.hpp"
#include "pod/experiment_harness.hpp"
#include "pod/pod_driver.hpp"
#include "pod/theory_checks.hpp"

#include "CLI11.hpp"
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

namespace {

// Flags shared by `run` and `trace`. Values are optional so that only flags
// given on the command line override the config file.
struct ExperimentFlags {
    std::optional<std::string> config;
    std::optional<std::int64_t> ring_length;
    std::optional<int> bits;
    std::optional<std::string> observability;
    std::optional<double> kappa;
    std::optional<double> gamma;
    std::optional<int> vi_sweeps;
    std::optional<int> iterations;
    std::optional<std::size_t> steps;
    std::optional<std::size_t> runs;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::string out = "pod_out";

    void attach(CLI::App& app, bool with_runs) {
        app.add_option("--config", config, "JSON config file; flags override its values");
        app.add_option("--ring-length", ring_length, "Ring length L (power of two)");
        app.add_option("--bits", bits, "Bit width of the state encoding");
        app.add_option("--observability", observability, "full or partial")
            ->check(CLI::IsMember({"full", "partial"}));
        app.add_option("--kappa", kappa, "Singular-value threshold");
        app.add_option("--gamma", gamma, "Discount factor for eigenbehaviours");
        app.add_option("--vi-sweeps", vi_sweeps, "Value-iteration sweeps");
        app.add_option("--iterations", iterations, "Number of POD phases");
        app.add_option("--steps", steps, "Primitive steps per phase");
        app.add_option("--seed", seed, "Seed (base seed for multi-run experiments)");
        if (with_runs) {
            app.add_option("--runs", runs, "Number of seeds");
            app.add_option("--workers", workers, "Concurrent runs");
        }
        app.add_option("--out", out, "Output directory");
    }

    pod::ExperimentConfig resolve() const {
        pod::ExperimentConfig cfg = config ? pod::load_config(*config) : pod::ExperimentConfig{};
        nlohmann::json overrides = nlohmann::json::object();
        if (ring_length) overrides["ring_length"] = *ring_length;
        if (bits) overrides["bits"] = *bits;
        if (observability) overrides["observability"] = *observability;
        if (kappa) overrides["kappa"] = *kappa;
        if (gamma) overrides["gamma"] = *gamma;
        if (vi_sweeps) overrides["vi_sweeps"] = *vi_sweeps;
        if (iterations) overrides["iterations"] = *iterations;
        if (steps) overrides["steps"] = *steps;
        if (runs) overrides["runs"] = *runs;
        if (seed) overrides["seed"] = *seed;
        if (workers) overrides["workers"] = *workers;
        pod::apply_json(cfg, overrides);
        cfg.pod.validate();
        return cfg;
    }
};

std::string fmt_opt(const std::optional<double>& v, int precision = 1) {
    return v ? fmt::format("{:.{}f}", *v, precision) : std::string("-");
}

void print_report(const pod::AggregateReport& report) {
    fmt::print("{} runs, {} observability, base seed {}\n", report.runs,
               pod::to_string(report.config.mode), report.base_seed);
    fmt::print("{:<24}", "metric");
    for (const auto& p : report.phases) fmt::print("{:>18}", fmt::format("iter {}", p.phase));
    fmt::print("\n");
    auto row = [&](const char* name, pod::Summary pod::PhaseAggregate::*field) {
        fmt::print("{:<24}", name);
        for (const auto& p : report.phases) {
            const pod::Summary& s = p.*field;
            fmt::print("{:>18}", fmt::format("{} ({})", fmt_opt(s.mean), fmt_opt(s.stddev)));
        }
        fmt::print("\n");
    };
    row("num options discovered", &pod::PhaseAggregate::new_options);
    row("avg option length", &pod::PhaseAggregate::avg_option_length);
    row("max dist from start", &pod::PhaseAggregate::max_dist_from_start);
}

int cmd_run(const ExperimentFlags& flags) {
    const pod::ExperimentConfig cfg = flags.resolve();
    const pod::AggregateReport report = pod::run_and_write(cfg, flags.out);
    print_report(report);
    fmt::print("wrote {}\n", flags.out);
    return 0;
}

int cmd_trace(const ExperimentFlags& flags, bool dump_options, bool dump_data) {
    const pod::ExperimentConfig cfg = flags.resolve();
    const std::filesystem::path dir = flags.out;
    std::filesystem::create_directories(dir);

    const pod::PodResult result = pod::run_pod(cfg.pod);
    const auto seed = cfg.pod.seed;
    pod::emit_trajectory(result, dir / fmt::format("trajectory_{}.csv", seed));
    pod::PodConfig control = cfg.pod;
    control.options_enabled = false;
    pod::emit_trajectory(pod::run_pod(control), dir / fmt::format("trajectory_{}_control.csv", seed));
    for (std::size_t k = 0; k < result.purposes.size(); ++k) {
        pod::write_purposes_csv(dir / fmt::format("purposes_phase{}.csv", k), result.purposes[k]);
        if (dump_data) result.datasets[k].write_csv(dir / fmt::format("data_phase{}.csv", k));
    }
    const pod::RingEnv env(cfg.pod.bits);
    if (dump_options)
        for (const auto& option : result.options.options())
            option.write_csv(dir / fmt::format("option_{}.csv", option.id()), env);

    const pod::RunMetrics metrics = pod::compute_metrics(result);
    fmt::print("seed {}: {} options discovered\n", seed, result.options.size());
    for (const auto& pm : metrics.phases) {
        fmt::print("  phase {}: new options {}, option executions {}, avg length {}, max dist {}\n",
                   pm.phase, pm.new_options ? std::to_string(*pm.new_options) : std::string("-"),
                   pm.option_executions, fmt_opt(pm.avg_option_length), pm.max_dist_from_start);
    }
    fmt::print("wrote {}\n", dir.string());
    return 0;
}

int cmd_verify(std::size_t instances, std::uint64_t seed, std::size_t pod_runs) {
    bool ok = true;
    for (const auto& entry : pod::theory::run_suite(instances, seed)) {
        fmt::print("{:<24} {}  instances={} failures={} worst_slack={:.3e}\n", entry.name,
                   entry.passed() ? "PASS" : "FAIL", entry.instances, entry.failures,
                   entry.worst_slack);
        ok = ok && entry.passed();
    }
    if (pod_runs > 0) {
        // Every constructed option must have a nonempty termination set.
        std::size_t options = 0, violations = 0;
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < pod_runs; ++r) {
            pod::PodConfig cfg;
            cfg.seed = seed + r;
            const pod::PodResult result = pod::run_pod(cfg);
            for (const auto& option : result.options.options()) {
                double lowest = std::numeric_limits<double>::infinity();
                for (std::size_t s = 0; s < option.num_states(); ++s)
                    lowest = std::min(lowest, option.qtable().best_primitive(s));
                worst = std::max(worst, lowest);
                ++options;
                if (!(lowest <= pod::kInitiationEpsilon) || option.termination_size() == 0)
                    ++violations;
            }
        }
        const bool pass = violations == 0;
        fmt::print("{:<24} {}  runs={} options={} worst_min_max_q={:.3e}\n", "termination_in_vivo",
                   pass ? "PASS" : "FAIL", pod_runs, options, worst);
        ok = ok && pass;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Purposeful option discovery on a deterministic ring"};
    app.require_subcommand(1);

    ExperimentFlags run_flags;
    auto* run = app.add_subcommand("run", "Multi-seed experiment; writes the results table");
    run_flags.attach(*run, true);

    ExperimentFlags trace_flags;
    bool dump_options = false, dump_data = false;
    auto* trace = app.add_subcommand("trace", "Single run; writes trajectory and purpose dumps");
    trace_flags.attach(*trace, false);
    trace->add_flag("--dump-options", dump_options, "Write option_<id>.csv per option");
    trace->add_flag("--dump-data", dump_data, "Write data_phase<k>.csv difference datasets");

    std::size_t instances = 200, pod_runs = 3;
    std::uint64_t verify_seed = 0;
    auto* verify = app.add_subcommand("verify", "Numerical checks of the termination bounds");
    verify->add_option("--instances", instances, "Random instances per check");
    verify->add_option("--seed", verify_seed, "Seed");
    verify->add_option("--pod-runs", pod_runs, "POD runs for the in-vivo termination check");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(run_flags);
        if (*trace) return cmd_trace(trace_flags, dump_options, dump_data);
        if (*verify) return cmd_verify(instances, verify_seed, pod_runs);
    } catch (const pod::Error& e) {
        std::fprintf(stderr, "pod: %s\n", e.what());
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::fprintf(stderr, "pod: %s\n", e.what());
        return 2;
    }
    return 0;
}
