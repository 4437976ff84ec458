#include "pod/option_runtime.hpp"

#include "pod/errors.hpp"

#include <algorithm>
#include <string>

namespace pod {

std::vector<Choice> available_choices(const RingEnv& env, RingState s,
                                      std::span<const DiscoveredOption> options) {
    std::vector<Choice> choices{PrimitiveAction::Left, PrimitiveAction::Right};
    const std::size_t idx = env.index(s);
    for (std::size_t k = 0; k < options.size(); ++k)
        if (options[k].in_initiation_set(idx)) choices.emplace_back(OptionRef{k});
    return choices;
}

OptionExecution execute_option(const RingEnv& env, const FeatureCodec& codec,
                               const DiscoveredOption& option, RingState s, std::size_t budget,
                               DiffDataset& log) {
    if (option.num_states() != env.num_states())
        throw ContractViolation("option was planned for a different ring");
    const std::size_t limit = std::min(budget, option_safety_cap(env));
    OptionExecution result{s, 0, false, {}};
    if (limit == 0) return result;
    if (option.terminates(env.index(s)))
        throw ContractViolation("option " + std::to_string(option.id()) +
                                " initiated in its termination set at " +
                                std::to_string(s.position));

    FeatureVector phi = codec.encode(s);
    while (!option.terminates(env.index(s)) && result.steps < limit) {
        s = env.step(s, option.policy(env.index(s)));
        FeatureVector phi_next = codec.encode(s);
        log.record(diff(phi_next, phi));
        phi = std::move(phi_next);
        result.path.push_back(s);
        ++result.steps;
    }
    result.final_state = s;
    result.hit_cap = !option.terminates(env.index(s));
    return result;
}

}  // namespace pod
