#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace pod::theory {

// Slack allowed on every bound below.
inline constexpr double kBoundSlack = 1e-8;
inline constexpr double kShiftTolerance = 1e-10;

// Row-stochastic matrix: nonnegative entries, rows summing to 1 within 1e-12.
class StochasticMatrix {
public:
    // Throws ContractViolation if `m` is not square and row-stochastic.
    explicit StochasticMatrix(Eigen::MatrixXd m);

    const Eigen::MatrixXd& matrix() const noexcept { return m_; }
    Eigen::Index size() const noexcept { return m_.rows(); }

private:
    Eigen::MatrixXd m_;
};

// Induced infinity norm: maximum absolute row sum.
double inf_norm(const Eigen::MatrixXd& m);

// Outcome of one check. `slack` is how far the observed quantity sits inside
// its bound (negative when violated).
struct CheckOutcome {
    bool passed = false;
    double slack = 0.0;
};

// ||(I + A)^{-1}||_inf <= 1 / (1 - ||A||_inf), for ||A||_inf < 1.
CheckOutcome check_lemma_inverse_bound(const Eigen::MatrixXd& A);

// ||(I - gamma T)^{-1} T||_inf <= 1 / (1 - gamma).
CheckOutcome check_lemma_resolvent_bound(const StochasticMatrix& T, double gamma);

// With w shifted to be nonnegative and v = (I - gamma T)^{-1} (T w - w):
// ||v + w||_inf <= ||w||_inf and v at argmax(w) is <= 0.
CheckOutcome check_theorem_value_bound(const StochasticMatrix& T, const Eigen::VectorXd& w,
                                       double gamma);

// Solves v = (I - gamma T)^{-1} (T w - w) without shifting w.
Eigen::VectorXd potential_values(const StochasticMatrix& T, const Eigen::VectorXd& w, double gamma);

// T w - w equals T (w + delta) - (w + delta) componentwise.
CheckOutcome check_shift_invariance(const StochasticMatrix& T, const Eigen::VectorXd& w,
                                    double delta);

// Uniform nonnegative entries, rows normalized.
StochasticMatrix random_stochastic(Eigen::Index n, std::mt19937_64& rng);
// Random matrix scaled to a random infinity norm in (0, max_norm].
Eigen::MatrixXd random_bounded(Eigen::Index n, double max_norm, std::mt19937_64& rng);

struct SuiteEntry {
    std::string name;
    std::size_t instances = 0;
    std::size_t failures = 0;
    double worst_slack = 0.0;

    bool passed() const noexcept { return failures == 0 && instances > 0; }
};

// Runs each check on `instances` random draws with n <= 50 and gamma drawn
// from {0.5, 0.9, 0.99}.
std::vector<SuiteEntry> run_suite(std::size_t instances, std::uint64_t seed);

}  // namespace pod::theory
