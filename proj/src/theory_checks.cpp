#include "pod/theory_checks.hpp"

#include "pod/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace pod::theory {

namespace {

// Reciprocal condition estimate below which an inverse is not trusted.
constexpr double kMinRcond = 1e-12;

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& m) {
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    if (!(lu.rcond() > kMinRcond)) throw NumericalFailure("matrix is numerically singular");
    Eigen::MatrixXd inv = lu.inverse();
    if (!inv.allFinite()) throw NumericalFailure("inverse has non-finite entries");
    return inv;
}

void check_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ContractViolation("gamma must lie in [0, 1)");
}

Eigen::MatrixXd resolvent(const StochasticMatrix& T, double gamma) {
    const Eigen::Index n = T.size();
    return checked_inverse(Eigen::MatrixXd::Identity(n, n) - gamma * T.matrix());
}

}  // namespace

StochasticMatrix::StochasticMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
        throw ContractViolation("stochastic matrix must be square and nonempty");
    if ((m_.array() < 0.0).any()) throw ContractViolation("stochastic matrix has a negative entry");
    for (Eigen::Index i = 0; i < m_.rows(); ++i)
        if (std::abs(m_.row(i).sum() - 1.0) > 1e-12)
            throw ContractViolation("stochastic matrix row does not sum to 1");
}

double inf_norm(const Eigen::MatrixXd& m) {
    return m.rows() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

CheckOutcome check_lemma_inverse_bound(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols()) throw ContractViolation("matrix must be square");
    const double norm_a = inf_norm(A);
    if (!(norm_a < 1.0)) throw ContractViolation("lemma requires ||A||_inf < 1");
    const Eigen::Index n = A.rows();
    const double observed = inf_norm(checked_inverse(Eigen::MatrixXd::Identity(n, n) + A));
    const double slack = 1.0 / (1.0 - norm_a) - observed;
    return {slack >= -kBoundSlack, slack};
}

CheckOutcome check_lemma_resolvent_bound(const StochasticMatrix& T, double gamma) {
    check_gamma(gamma);
    const double observed = inf_norm(resolvent(T, gamma) * T.matrix());
    const double slack = 1.0 / (1.0 - gamma) - observed;
    return {slack >= -kBoundSlack, slack};
}

Eigen::VectorXd potential_values(const StochasticMatrix& T, const Eigen::VectorXd& w, double gamma) {
    check_gamma(gamma);
    if (w.size() != T.size()) throw ContractViolation("potential has wrong length");
    const Eigen::VectorXd reward = T.matrix() * w - w;
    const Eigen::Index n = T.size();
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(n, n) - gamma * T.matrix());
    if (!(lu.rcond() > kMinRcond)) throw NumericalFailure("I - gamma T is numerically singular");
    return lu.solve(reward);
}

CheckOutcome check_theorem_value_bound(const StochasticMatrix& T, const Eigen::VectorXd& w,
                                       double gamma) {
    if (!w.allFinite()) throw ContractViolation("potential must be finite");
    // The reward T w - w is unchanged by a constant shift, so make w >= 0.
    const Eigen::VectorXd shifted = (w.array() - std::min(0.0, w.minCoeff())).matrix();
    const Eigen::VectorXd v = potential_values(T, shifted, gamma);

    Eigen::Index best = 0;
    const double w_norm = shifted.maxCoeff(&best);
    const double norm_slack = w_norm - (v + shifted).cwiseAbs().maxCoeff();
    const double sign_slack = -v[best];
    const double slack = std::min(norm_slack, sign_slack);
    return {slack >= -kBoundSlack, slack};
}

CheckOutcome check_shift_invariance(const StochasticMatrix& T, const Eigen::VectorXd& w,
                                    double delta) {
    if (w.size() != T.size()) throw ContractViolation("potential has wrong length");
    const Eigen::VectorXd moved = (w.array() + delta).matrix();
    const Eigen::VectorXd lhs = T.matrix() * w - w;
    const Eigen::VectorXd rhs = T.matrix() * moved - moved;
    const double gap = lhs.size() == 0 ? 0.0 : (lhs - rhs).cwiseAbs().maxCoeff();
    return {gap <= kShiftTolerance, kShiftTolerance - gap};
}

StochasticMatrix random_stochastic(Eigen::Index n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = unit(rng);
        m.row(i) /= m.row(i).sum();
    }
    return StochasticMatrix(std::move(m));
}

Eigen::MatrixXd random_bounded(Eigen::Index n, double max_norm, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    std::uniform_real_distribution<double> scale(0.0, 1.0);
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = entry(rng);
    const double norm = inf_norm(m);
    if (norm == 0.0) return m;
    // 1 - U keeps the target norm strictly positive.
    return m * (max_norm * (1.0 - scale(rng)) / norm);
}

std::vector<SuiteEntry> run_suite(std::size_t instances, std::uint64_t seed) {
    constexpr std::array<double, 3> kGammas = {0.5, 0.9, 0.99};
    constexpr Eigen::Index kMaxDim = 50;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> dim(1, kMaxDim);
    std::uniform_real_distribution<double> value(-10.0, 10.0);

    std::vector<SuiteEntry> suite = {{"lemma_inverse_bound"},
                                     {"lemma_resolvent_bound"},
                                     {"theorem_value_bound"},
                                     {"shift_invariance"}};
    for (auto& entry : suite) entry.worst_slack = std::numeric_limits<double>::infinity();

    auto record = [](SuiteEntry& entry, const CheckOutcome& outcome) {
        ++entry.instances;
        if (!outcome.passed) ++entry.failures;
        entry.worst_slack = std::min(entry.worst_slack, outcome.slack);
    };
    auto random_vector = [&](Eigen::Index n) {
        Eigen::VectorXd w(n);
        for (Eigen::Index i = 0; i < n; ++i) w[i] = value(rng);
        return w;
    };

    for (std::size_t k = 0; k < instances; ++k) {
        const Eigen::Index n = dim(rng);
        const double gamma = kGammas[k % kGammas.size()];
        record(suite[0], check_lemma_inverse_bound(random_bounded(n, 0.9, rng)));
        const StochasticMatrix T = random_stochastic(n, rng);
        record(suite[1], check_lemma_resolvent_bound(T, gamma));
        record(suite[2], check_theorem_value_bound(T, random_vector(n), gamma));
        record(suite[3], check_shift_invariance(T, random_vector(n), value(rng)));
    }
    return suite;
}

}  // namespace pod::theory
