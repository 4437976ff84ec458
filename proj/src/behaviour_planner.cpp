#include "pod/behaviour_planner.hpp"

#include "pod/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <string>

namespace pod {

double QTable::q(std::size_t state, PlanAction a) const {
    switch (a) {
        case PlanAction::Left: return left[state];
        case PlanAction::Right: return right[state];
        case PlanAction::Terminate: return 0.0;
    }
    return 0.0;
}

double intrinsic_reward(const Eigen::VectorXd& e, const FeatureVector& phi_prev,
                        const FeatureVector& phi_next) {
    if (static_cast<std::size_t>(e.size()) != phi_prev.size())
        throw ContractViolation("eigenpurpose has dimension " + std::to_string(e.size()) +
                                " but features have " + std::to_string(phi_prev.size()));
    const DiffVector d = diff(phi_next, phi_prev);
    double r = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) r += e[static_cast<Eigen::Index>(i)] * d.values[i];
    return r;
}

QTable value_iteration(const RingEnv& env, const Eigen::MatrixXd& features,
                       const Eigen::VectorXd& e, double gamma, int sweeps) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ContractViolation("gamma must lie in [0, 1)");
    if (sweeps < 1) throw ContractViolation("value iteration needs at least one sweep");
    const std::size_t n = env.num_states();
    if (static_cast<std::size_t>(features.rows()) != n || features.cols() != e.size())
        throw ContractViolation("feature table shape does not match ring and eigenpurpose");

    std::vector<std::size_t> next_left(n), next_right(n);
    std::vector<double> r_left(n), r_right(n);
    for (std::size_t i = 0; i < n; ++i) {
        const RingState s = env.state_at(i);
        next_left[i] = env.index(env.step(s, PrimitiveAction::Left));
        next_right[i] = env.index(env.step(s, PrimitiveAction::Right));
        const auto row = static_cast<Eigen::Index>(i);
        // Difference first, then projection: a constant offset in phi cancels exactly.
        r_left[i] = e.dot(features.row(static_cast<Eigen::Index>(next_left[i])) - features.row(row));
        r_right[i] =
            e.dot(features.row(static_cast<Eigen::Index>(next_right[i])) - features.row(row));
    }

    QTable q{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    std::vector<double> v(n, 0.0);
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (std::size_t i = 0; i < n; ++i) v[i] = std::max({0.0, q.left[i], q.right[i]});
        for (std::size_t i = 0; i < n; ++i) {
            q.left[i] = r_left[i] + gamma * v[next_left[i]];
            q.right[i] = r_right[i] + gamma * v[next_right[i]];
        }
    }
    return q;
}

QTable value_iteration(const RingEnv& env, const FeatureCodec& codec, const Eigen::VectorXd& e,
                       double gamma, int sweeps) {
    return value_iteration(env, codec.feature_table(env), e, gamma, sweeps);
}

DiscoveredOption::DiscoveredOption(std::size_t id, Eigenpurpose purpose, QTable q, double eps_q)
    : id_(id), purpose_(std::move(purpose)), q_(std::move(q)) {
    if (q_.left.size() != q_.right.size())
        throw ContractViolation("incomplete q-table");
    const std::size_t n = q_.num_states();
    initiation_.assign(n, 0);
    policy_.assign(n, PrimitiveAction::Left);
    for (std::size_t i = 0; i < n; ++i) {
        if (q_.best_primitive(i) > eps_q) {
            initiation_[i] = 1;
            ++initiation_count_;
        }
        policy_[i] = q_.right[i] > q_.left[i] ? PrimitiveAction::Right : PrimitiveAction::Left;
    }
}

void DiscoveredOption::write_csv(const std::filesystem::path& path, const RingEnv& env) const {
    std::ofstream out(path);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out << "state,q_left,q_right,in_initiation_set\n";
    for (std::size_t i = 0; i < num_states(); ++i) {
        out << env.state_at(i).position << ',' << fmt::format("{:.9f}", q_.left[i]) << ','
            << fmt::format("{:.9f}", q_.right[i]) << ',' << (in_initiation_set(i) ? 1 : 0) << '\n';
    }
    if (!out) throw IoError(path.string(), "write failed");
}

DiscoveredOption build_option(QTable q, Eigenpurpose purpose, double eps_q, std::size_t id) {
    return DiscoveredOption(id, std::move(purpose), std::move(q), eps_q);
}

}  // namespace pod
