#include "pod/feature_codec.hpp"

#include "pod/errors.hpp"

#include <string>

namespace pod {

std::string_view to_string(ObservabilityMode mode) {
    return mode == ObservabilityMode::Full ? "full" : "partial";
}

ObservabilityMode parse_observability(std::string_view text) {
    if (text == "full") return ObservabilityMode::Full;
    if (text == "partial") return ObservabilityMode::Partial;
    throw ContractViolation("unknown observability mode '" + std::string(text) + "'");
}

DiffVector diff(const FeatureVector& next, const FeatureVector& prev) {
    if (next.size() != prev.size())
        throw ContractViolation("feature length mismatch: " + std::to_string(next.size()) +
                                " vs " + std::to_string(prev.size()));
    DiffVector d;
    d.values.resize(next.size());
    for (std::size_t i = 0; i < next.size(); ++i)
        d.values[i] = static_cast<std::int8_t>(next.bits[i] - prev.bits[i]);
    return d;
}

DiffVector operator-(const DiffVector& v) {
    DiffVector out = v;
    for (auto& x : out.values) x = static_cast<std::int8_t>(-x);
    return out;
}

FeatureCodec::FeatureCodec(int bits, ObservabilityMode mode) : bits_(bits), mode_(mode) {
    const int hidden = mode == ObservabilityMode::Partial ? kHiddenLowBits : 0;
    if (bits <= hidden)
        throw ContractViolation("partial observability needs more than " +
                                std::to_string(kHiddenLowBits) + " bits");
    dimension_ = static_cast<std::size_t>(bits - hidden);
}

FeatureVector FeatureCodec::encode(RingState s) const {
    const auto pattern = static_cast<std::uint32_t>(s.position);
    FeatureVector v;
    v.bits.resize(dimension_);
    // Component 0 is the sign bit; the last component is the lowest visible bit.
    for (std::size_t i = 0; i < dimension_; ++i) {
        const int bit = bits_ - 1 - static_cast<int>(i);
        v.bits[i] = static_cast<std::uint8_t>((pattern >> bit) & 1u);
    }
    return v;
}

Eigen::MatrixXd FeatureCodec::feature_table(const RingEnv& env) const {
    if (env.bits() != bits_)
        throw ContractViolation("codec and ring disagree on bit width");
    Eigen::MatrixXd table(static_cast<Eigen::Index>(env.num_states()),
                          static_cast<Eigen::Index>(dimension_));
    for (std::size_t i = 0; i < env.num_states(); ++i) {
        const FeatureVector f = encode(env.state_at(i));
        for (std::size_t j = 0; j < dimension_; ++j)
            table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f.bits[j];
    }
    return table;
}

}  // namespace pod
