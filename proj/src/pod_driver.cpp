#include "pod/pod_driver.hpp"

#include "pod/errors.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace pod {

void PodConfig::validate() const {
    if (bits < 4 || bits > 24) throw ContractViolation("bits must be in [4, 24]");
    if (!(kappa >= 0.0)) throw ContractViolation("kappa must be nonnegative");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ContractViolation("gamma must lie in [0, 1)");
    if (vi_sweeps < 1) throw ContractViolation("vi_sweeps must be positive");
    if (iterations < 1) throw ContractViolation("iterations must be positive");
    if (steps < 1) throw ContractViolation("steps per phase must be positive");
}

void OptionSet::add(DiscoveredOption option, int discovered_from_phase) {
    option.set_id(options_.size());
    options_.push_back(std::move(option));
    phases_.push_back(discovered_from_phase);
}

std::int64_t PhaseTrace::max_distance_from_start(const RingEnv& env) const {
    std::int64_t best = 0;
    for (const auto& step : steps) best = std::max(best, env.distance(start, step.position));
    return best;
}

std::optional<double> PhaseTrace::mean_option_length() const {
    if (invocations.empty()) return std::nullopt;
    double total = 0.0;
    for (const auto& inv : invocations) total += static_cast<double>(inv.length);
    return total / static_cast<double>(invocations.size());
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    if (n == 0) throw ContractViolation("cannot sample from an empty range");
    const std::uint64_t range = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<std::size_t>(x % range);
}

PhaseResult run_phase(const RingEnv& env, const FeatureCodec& codec, const PodConfig& cfg,
                      std::span<const DiscoveredOption> options, RingState start,
                      std::mt19937_64& rng, int phase) {
    PhaseResult result{DiffDataset(phase), PhaseTrace{phase, start, {}, {}}, start};
    result.trace.steps.reserve(cfg.steps);
    RingState s = start;
    FeatureVector phi = codec.encode(s);

    while (result.data.rows() < cfg.steps) {
        const std::vector<Choice> choices = available_choices(env, s, options);
        const Choice& choice = choices[uniform_index(rng, choices.size())];

        if (const auto* action = std::get_if<PrimitiveAction>(&choice)) {
            s = env.step(s, *action);
            FeatureVector phi_next = codec.encode(s);
            result.data.record(diff(phi_next, phi));
            phi = std::move(phi_next);
            result.trace.steps.push_back({s, std::nullopt});
            continue;
        }

        const DiscoveredOption& option = options[std::get<OptionRef>(choice).index];
        const OptionExecution run = execute_option(env, codec, option, s,
                                                   cfg.steps - result.data.rows(), result.data);
        for (const RingState& p : run.path) result.trace.steps.push_back({p, option.id()});
        result.trace.invocations.push_back({option.id(), run.steps, run.hit_cap});
        s = run.final_state;
        phi = codec.encode(s);
    }
    result.end = s;
    return result;
}

std::vector<DiscoveredOption> discover_options(const RingEnv& env, const Eigen::MatrixXd& features,
                                               std::span<const Eigenpurpose> purposes,
                                               const PodConfig& cfg, std::size_t first_id) {
    std::vector<DiscoveredOption> found;
    for (const Eigenpurpose& purpose : purposes) {
        QTable q = value_iteration(env, features, purpose.direction, cfg.gamma, cfg.vi_sweeps);
        DiscoveredOption option =
            build_option(std::move(q), purpose, kInitiationEpsilon, first_id + found.size());
        if (!option.degenerate()) found.push_back(std::move(option));
    }
    return found;
}

PodResult run_pod(const PodConfig& cfg) {
    cfg.validate();
    const RingEnv env(cfg.bits);
    const FeatureCodec codec(cfg.bits, cfg.mode);
    const Eigen::MatrixXd features = codec.feature_table(env);
    std::mt19937_64 rng(cfg.seed);

    PodResult result{cfg, {}, {}, {}, {}, {}};
    RingState s{0};
    for (int phase = 0; phase < cfg.iterations; ++phase) {
        PhaseResult collected = run_phase(env, codec, cfg, result.options.options(), s, rng, phase);
        s = collected.end;
        result.traces.push_back(std::move(collected.trace));

        if (!cfg.options_enabled) {
            result.purposes.emplace_back();
            result.discovered_per_phase.push_back(0);
            result.datasets.push_back(std::move(collected.data));
            continue;
        }
        std::vector<Eigenpurpose> purposes = extract(collected.data.as_matrix(), cfg.kappa, phase);
        result.datasets.push_back(std::move(collected.data));
        std::vector<DiscoveredOption> found =
            discover_options(env, features, purposes, cfg, result.options.size());
        result.discovered_per_phase.push_back(found.size());
        for (auto& option : found) result.options.add(std::move(option), phase);
        result.purposes.push_back(std::move(purposes));
    }
    return result;
}

}  // namespace pod
