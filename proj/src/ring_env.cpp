#include "pod/ring_env.hpp"

#include "pod/errors.hpp"

#include <string>

namespace pod {

std::string_view to_string(PrimitiveAction a) {
    return a == PrimitiveAction::Left ? "left" : "right";
}

RingEnv::RingEnv(int bits) : bits_(bits), length_(std::int64_t{1} << bits) {
    if (bits < 1 || bits > 30)
        throw ContractViolation("ring bit width must be in [1, 30], got " + std::to_string(bits));
}

RingState RingEnv::step(RingState s, PrimitiveAction a) const {
    if (!valid(s))
        throw ContractViolation("state " + std::to_string(s.position) + " outside ring");
    const std::size_t next =
        a == PrimitiveAction::Right ? index(s) + 1 : index(s) + static_cast<std::size_t>(length_) - 1;
    return state_at(next & static_cast<std::size_t>(length_ - 1));
}

std::int64_t RingEnv::distance(RingState a, RingState b) const {
    const std::int64_t d = (static_cast<std::int64_t>(a.position) - b.position) % length_;
    const std::int64_t m = d < 0 ? -d : d;
    return m < length_ - m ? m : length_ - m;
}

RingState RingEnv::state_at(std::size_t index) const noexcept {
    const auto i = static_cast<std::int64_t>(index);
    return {static_cast<std::int32_t>(i < length_ / 2 ? i : i - length_)};
}

}  // namespace pod
