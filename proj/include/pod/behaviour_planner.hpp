#pragma once

#include "pod/feature_codec.hpp"
#include "pod/purpose_extractor.hpp"
#include "pod/ring_env.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <vector>

namespace pod {

// Threshold for the strict "q > 0" initiation test.
inline constexpr double kInitiationEpsilon = 1e-9;

// Action of the intrinsic MDP: a primitive move or the terminate action,
// whose value is zero everywhere.
enum class PlanAction : std::uint8_t { Left, Right, Terminate };

// Tabular action values over ring states (RingEnv::index order). The
// terminate action is not stored; it is always worth exactly 0.
struct QTable {
    std::vector<double> left;
    std::vector<double> right;

    std::size_t num_states() const noexcept { return left.size(); }
    double q(std::size_t state, PlanAction a) const;
    double q(std::size_t state, PrimitiveAction a) const {
        return a == PrimitiveAction::Left ? left[state] : right[state];
    }
    double best_primitive(std::size_t state) const {
        return left[state] > right[state] ? left[state] : right[state];
    }
};

// e^T (phi_next - phi_prev). Throws ContractViolation on length mismatch.
double intrinsic_reward(const Eigen::VectorXd& e, const FeatureVector& phi_prev,
                        const FeatureVector& phi_next);

// Synchronous value iteration on the terminate-augmented intrinsic MDP.
// Starts from q = 0 and performs exactly `sweeps` Jacobi sweeps of
//   q(s,a) <- r(s,a,s') + gamma * max(0, q(s',Left), q(s',Right)).
// `features` holds phi(s) for every state, one row per RingEnv::index.
QTable value_iteration(const RingEnv& env, const Eigen::MatrixXd& features,
                       const Eigen::VectorXd& e, double gamma, int sweeps);

QTable value_iteration(const RingEnv& env, const FeatureCodec& codec, const Eigen::VectorXd& e,
                       double gamma, int sweeps);

// Option <I, pi, S \ I> built from an eigenbehaviour's action values.
class DiscoveredOption {
public:
    DiscoveredOption(std::size_t id, Eigenpurpose purpose, QTable q, double eps_q);

    std::size_t id() const noexcept { return id_; }
    void set_id(std::size_t id) noexcept { id_ = id; }
    const Eigenpurpose& purpose() const noexcept { return purpose_; }
    const QTable& qtable() const noexcept { return q_; }

    bool in_initiation_set(std::size_t state) const { return initiation_[state] != 0; }
    // beta(s): 1 inside the termination set, 0 elsewhere.
    bool terminates(std::size_t state) const { return initiation_[state] == 0; }
    PrimitiveAction policy(std::size_t state) const { return policy_[state]; }

    std::size_t initiation_size() const noexcept { return initiation_count_; }
    std::size_t termination_size() const noexcept { return initiation_.size() - initiation_count_; }
    std::size_t num_states() const noexcept { return initiation_.size(); }
    // An option that can never be initiated.
    bool degenerate() const noexcept { return initiation_count_ == 0; }

    // Columns: state, q_left, q_right, in_initiation_set.
    void write_csv(const std::filesystem::path& path, const RingEnv& env) const;

private:
    std::size_t id_;
    Eigenpurpose purpose_;
    QTable q_;
    std::vector<std::uint8_t> initiation_;
    std::vector<PrimitiveAction> policy_;
    std::size_t initiation_count_ = 0;
};

// I = {s : max_a q(s,a) > eps_q}; greedy policy with ties going Left.
DiscoveredOption build_option(QTable q, Eigenpurpose purpose, double eps_q = kInitiationEpsilon,
                              std::size_t id = 0);

}  // namespace pod
