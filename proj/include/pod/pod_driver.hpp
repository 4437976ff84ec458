#pragma once

#include "pod/behaviour_planner.hpp"
#include "pod/feature_codec.hpp"
#include "pod/option_runtime.hpp"
#include "pod/purpose_extractor.hpp"
#include "pod/ring_env.hpp"
#include "pod/transition_log.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace pod {

struct PodConfig {
    int bits = 12;
    ObservabilityMode mode = ObservabilityMode::Full;
    double kappa = 1.0;
    double gamma = 0.99;
    int vi_sweeps = 100;
    int iterations = 6;       // n_I
    std::size_t steps = 1000; // n_R, primitive steps per phase
    std::uint64_t seed = 0;
    // When false the run is a primitive-only random walk (no discovery).
    bool options_enabled = true;

    std::int64_t ring_length() const { return std::int64_t{1} << bits; }
    // Throws ContractViolation on out-of-range values.
    void validate() const;
};

// Omega: options in discovery order, never shrinking.
class OptionSet {
public:
    void add(DiscoveredOption option, int discovered_from_phase);

    std::size_t size() const noexcept { return options_.size(); }
    bool empty() const noexcept { return options_.empty(); }
    std::span<const DiscoveredOption> options() const noexcept { return options_; }
    const DiscoveredOption& operator[](std::size_t i) const { return options_[i]; }
    // Phase whose data produced option i.
    int discovered_from_phase(std::size_t i) const { return phases_[i]; }

private:
    std::vector<DiscoveredOption> options_;
    std::vector<int> phases_;
};

struct StepRecord {
    RingState position;  // after the step
    std::optional<std::size_t> option_id;  // set when the step was taken inside an option
};

struct OptionInvocation {
    std::size_t option_id = 0;
    std::size_t length = 0;
    bool hit_cap = false;
};

struct PhaseTrace {
    int phase = 0;
    RingState start;
    std::vector<StepRecord> steps;
    std::vector<OptionInvocation> invocations;

    std::int64_t max_distance_from_start(const RingEnv& env) const;
    std::optional<double> mean_option_length() const;
};

// Uniform integer in [0, n) from a 64-bit engine, by rejection sampling.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n);

struct PhaseResult {
    DiffDataset data;
    PhaseTrace trace;
    RingState end;
};

// One collection phase: exactly cfg.steps primitive steps, each logged as a
// difference row. At every decision point a choice is drawn uniformly from
// available_choices; options run with the remaining budget.
PhaseResult run_phase(const RingEnv& env, const FeatureCodec& codec, const PodConfig& cfg,
                      std::span<const DiscoveredOption> options, RingState start,
                      std::mt19937_64& rng, int phase);

// Plans +e/-e eigenbehaviours for every purpose and returns the options with
// nonempty initiation sets, in purpose order. Ids start at first_id.
std::vector<DiscoveredOption> discover_options(const RingEnv& env, const Eigen::MatrixXd& features,
                                               std::span<const Eigenpurpose> purposes,
                                               const PodConfig& cfg, std::size_t first_id);

struct PodResult {
    PodConfig config;
    OptionSet options;
    std::vector<PhaseTrace> traces;
    // Purposes extracted from each phase's data (empty when discovery is off).
    std::vector<std::vector<Eigenpurpose>> purposes;
    // Options added to the set from each phase's data.
    std::vector<std::size_t> discovered_per_phase;
    // The difference dataset collected in each phase.
    std::vector<DiffDataset> datasets;
};

// The full collect / SVD / plan / augment loop. The agent starts at 0 and
// keeps its position across phases. Deterministic given cfg.seed.
PodResult run_pod(const PodConfig& cfg);

}  // namespace pod
