#include "doctest.h"

#include "pod/errors.hpp"
#include "pod/theory_checks.hpp"

#include <random>

using namespace pod;
using namespace pod::theory;

TEST_CASE("stochastic matrix validation") {
    CHECK_NOTHROW(StochasticMatrix(Eigen::MatrixXd::Identity(3, 3)));
    Eigen::MatrixXd bad(2, 2);
    bad << 0.5, 0.6, 0.5, 0.5;
    CHECK_THROWS_AS(StochasticMatrix{bad}, ContractViolation);
    bad << 1.5, -0.5, 0.5, 0.5;
    CHECK_THROWS_AS(StochasticMatrix{bad}, ContractViolation);
    CHECK_THROWS_AS(StochasticMatrix(Eigen::MatrixXd::Ones(2, 3) / 3.0), ContractViolation);
}

TEST_CASE("inf norm is the maximum absolute row sum") {
    Eigen::MatrixXd m(2, 2);
    m << 1, -2, 0.5, 0.5;
    CHECK(inf_norm(m) == 3.0);
}

TEST_CASE("inverse bound") {
    const auto zero = check_lemma_inverse_bound(Eigen::MatrixXd::Zero(3, 3));
    CHECK(zero.passed);
    CHECK(zero.slack == doctest::Approx(0.0));

    // (0.5 I)^{-1} has norm 2 = 1 / (1 - 0.5): tight.
    const auto tight = check_lemma_inverse_bound(-0.5 * Eigen::MatrixXd::Identity(3, 3));
    CHECK(tight.passed);
    CHECK(std::abs(tight.slack) < 1e-12);

    CHECK_THROWS_AS(check_lemma_inverse_bound(Eigen::MatrixXd::Identity(2, 2)), ContractViolation);
}

TEST_CASE("resolvent bound") {
    const StochasticMatrix identity(Eigen::MatrixXd::Identity(4, 4));
    const auto tight = check_lemma_resolvent_bound(identity, 0.5);
    CHECK(tight.passed);
    CHECK(std::abs(tight.slack) < 1e-12);

    std::mt19937_64 rng(5);
    const auto T = random_stochastic(6, rng);
    const auto zero_gamma = check_lemma_resolvent_bound(T, 0.0);
    CHECK(zero_gamma.passed);
    CHECK(std::abs(zero_gamma.slack) < 1e-12);  // ||T|| = 1

    CHECK_THROWS_AS(check_lemma_resolvent_bound(T, 1.0), ContractViolation);
}

TEST_CASE("value bound on the 2-state swap chain") {
    Eigen::MatrixXd swap(2, 2);
    swap << 0, 1, 1, 0;
    const StochasticMatrix T(swap);
    const Eigen::Vector2d w(1, 0);

    // Oracle: solve (I - 0.5 T) v = T w - w = (-1, 1) by Cramer's rule.
    const double det = 1.0 - 0.25;
    const Eigen::Vector2d expected((-1.0 + 0.5 * 1.0) / det, (1.0 + 0.5 * -1.0) / det);
    CHECK(expected[0] == doctest::Approx(-2.0 / 3.0));
    const Eigen::VectorXd v = potential_values(T, w, 0.5);
    CHECK(v[0] == doctest::Approx(expected[0]).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(expected[1]).epsilon(1e-12));

    const auto outcome = check_theorem_value_bound(T, w, 0.5);
    CHECK(outcome.passed);
    // min(||w|| - ||v + w||, -v[argmax w]) = min(1 - 2/3, 2/3).
    CHECK(outcome.slack == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("constant potential gives zero values") {
    std::mt19937_64 rng(8);
    const auto T = random_stochastic(5, rng);
    const Eigen::VectorXd w = Eigen::VectorXd::Constant(5, -4.2);
    CHECK(potential_values(T, w, 0.9).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(check_theorem_value_bound(T, w, 0.9).passed);
}

TEST_CASE("shift invariance") {
    std::mt19937_64 rng(9);
    const auto T = random_stochastic(7, rng);
    Eigen::VectorXd w(7);
    w << 1, -2, 3, 0.5, 8, -1, 2;
    CHECK(check_shift_invariance(T, w, 0.0).passed);
    CHECK(check_shift_invariance(T, w, 7.3).passed);
}

TEST_CASE("random generators respect their contracts") {
    std::mt19937_64 rng(10);
    for (int k = 0; k < 50; ++k) {
        const auto n = 1 + k % 20;
        CHECK(inf_norm(random_bounded(n, 0.9, rng)) <= 0.9 + 1e-15);
        CHECK_NOTHROW(random_stochastic(n, rng));
    }
}

TEST_CASE("suite passes on 200 seeded instances") {
    const auto suite = run_suite(200, 1234);
    REQUIRE(suite.size() == 4);
    for (const auto& entry : suite) {
        INFO(entry.name);
        CHECK(entry.instances == 200);
        CHECK(entry.passed());
        CHECK(entry.worst_slack >= -kBoundSlack);
    }
}
