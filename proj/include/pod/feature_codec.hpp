#pragma once

#include "pod/ring_env.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>
#include <vector>

namespace pod {

enum class ObservabilityMode : std::uint8_t { Full, Partial };

// Number of least significant bits hidden in Partial mode.
inline constexpr int kHiddenLowBits = 3;

std::string_view to_string(ObservabilityMode mode);
ObservabilityMode parse_observability(std::string_view text);

// Binary feature vector phi(s), most significant bit first.
struct FeatureVector {
    std::vector<std::uint8_t> bits;

    std::size_t size() const noexcept { return bits.size(); }
    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// phi(s') - phi(s); every component is -1, 0 or 1.
struct DiffVector {
    std::vector<std::int8_t> values;

    std::size_t size() const noexcept { return values.size(); }
    friend bool operator==(const DiffVector&, const DiffVector&) = default;
};

DiffVector diff(const FeatureVector& next, const FeatureVector& prev);
DiffVector operator-(const DiffVector& v);

class FeatureCodec {
public:
    FeatureCodec(int bits, ObservabilityMode mode);

    int bits() const noexcept { return bits_; }
    ObservabilityMode mode() const noexcept { return mode_; }
    std::size_t dimension() const noexcept { return dimension_; }

    FeatureVector encode(RingState s) const;

    // One row per ring state in RingEnv::index order, features as reals.
    Eigen::MatrixXd feature_table(const RingEnv& env) const;

private:
    int bits_;
    ObservabilityMode mode_;
    std::size_t dimension_;
};

}  // namespace pod
