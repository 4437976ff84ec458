#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace pod {

// Position on the ring, stored in two's-complement range [-L/2, L/2 - 1].
struct RingState {
    std::int32_t position = 0;

    friend constexpr bool operator==(RingState, RingState) = default;
    friend constexpr auto operator<=>(RingState, RingState) = default;
};

enum class PrimitiveAction : std::uint8_t { Left, Right };

inline constexpr std::array<PrimitiveAction, 2> kPrimitiveActions = {
    PrimitiveAction::Left, PrimitiveAction::Right};

std::string_view to_string(PrimitiveAction a);

// Deterministic ring world of length L = 2^bits. There is no reward.
class RingEnv {
public:
    explicit RingEnv(int bits = 12);

    int bits() const noexcept { return bits_; }
    std::int64_t length() const noexcept { return length_; }

    RingState min_state() const noexcept { return {static_cast<std::int32_t>(-length_ / 2)}; }
    RingState max_state() const noexcept { return {static_cast<std::int32_t>(length_ / 2 - 1)}; }
    bool valid(RingState s) const noexcept {
        return s.position >= min_state().position && s.position <= max_state().position;
    }

    // Right adds one, Left subtracts one; both wrap in two's-complement range.
    RingState step(RingState s, PrimitiveAction a) const;

    // Shortest arc length between a and b, in [0, L/2].
    std::int64_t distance(RingState a, RingState b) const;

    // Dense state index: the unsigned bit pattern of the position.
    std::size_t index(RingState s) const noexcept {
        return static_cast<std::size_t>(static_cast<std::uint32_t>(s.position) &
                                        static_cast<std::uint32_t>(length_ - 1));
    }
    RingState state_at(std::size_t index) const noexcept;
    std::size_t num_states() const noexcept { return static_cast<std::size_t>(length_); }

private:
    int bits_;
    std::int64_t length_;
};

}  // namespace pod
