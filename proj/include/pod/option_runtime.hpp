#pragma once

#include "pod/behaviour_planner.hpp"
#include "pod/feature_codec.hpp"
#include "pod/ring_env.hpp"
#include "pod/transition_log.hpp"

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace pod {

// Index into the current option set.
struct OptionRef {
    std::size_t index = 0;
    friend bool operator==(OptionRef, OptionRef) = default;
};

using Choice = std::variant<PrimitiveAction, OptionRef>;

// {Left, Right} followed by every option whose initiation set contains s,
// in option-set order. Each choice is one equally weighted slot.
std::vector<Choice> available_choices(const RingEnv& env, RingState s,
                                      std::span<const DiscoveredOption> options);

// Upper bound on primitive steps in a single option execution.
inline std::size_t option_safety_cap(const RingEnv& env) { return 16 * env.num_states(); }

struct OptionExecution {
    RingState final_state;
    std::size_t steps = 0;
    // True when execution stopped on the budget or safety cap instead of
    // reaching the termination set.
    bool hit_cap = false;
    // State after each primitive step.
    std::vector<RingState> path;
};

// Follows the option's policy from s, logging phi(s') - phi(s) for every
// primitive step, until the state is in the termination set or
// min(budget, option_safety_cap) steps were taken. Throws ContractViolation
// when s is not in the initiation set.
OptionExecution execute_option(const RingEnv& env, const FeatureCodec& codec,
                               const DiscoveredOption& option, RingState s, std::size_t budget,
                               DiffDataset& log);

}  // namespace pod
