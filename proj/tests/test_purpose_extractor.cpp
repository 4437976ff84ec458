#include "doctest.h"

#include "svd_oracle.hpp"

#include "pod/errors.hpp"
#include "pod/feature_codec.hpp"
#include "pod/purpose_extractor.hpp"
#include "pod/transition_log.hpp"

#include <cmath>
#include <random>

using namespace pod;

namespace {

Eigen::MatrixXd random_walk_dataset(std::uint64_t seed, int steps = 1000) {
    const RingEnv env(12);
    const FeatureCodec codec(12, ObservabilityMode::Full);
    std::mt19937_64 rng(seed);
    DiffDataset d;
    RingState s{0};
    for (int t = 0; t < steps; ++t) {
        const RingState next = env.step(s, rng() & 1 ? PrimitiveAction::Right : PrimitiveAction::Left);
        d.record(diff(codec.encode(next), codec.encode(s)));
        s = next;
    }
    return d.as_matrix();
}

}  // namespace

TEST_CASE("canonicalize") {
    CHECK(canonicalize(Eigen::Vector2d(-1, 0)) == Eigen::VectorXd(Eigen::Vector2d(1, 0)));
    CHECK(canonicalize(Eigen::Vector3d(0, 0.6, -0.8)) == Eigen::VectorXd(Eigen::Vector3d(0, 0.6, -0.8)));
    CHECK(canonicalize(Eigen::Vector3d(0, -0.6, 0.8)) == Eigen::VectorXd(Eigen::Vector3d(0, 0.6, -0.8)));
    CHECK_THROWS_AS(canonicalize(Eigen::Vector3d::Zero()), ContractViolation);
}

TEST_CASE("zero and empty matrices") {
    CHECK(extract(Eigen::MatrixXd::Zero(5, 4), 1.0).empty());
    CHECK_THROWS_AS(extract(Eigen::MatrixXd(0, 4), 1.0), EmptyDataset);
    CHECK_THROWS_AS(extract(Eigen::MatrixXd::Ones(2, 2), -1.0), ContractViolation);
}

TEST_CASE("nine copies of (1, 0) give sigma 3 along +-(1, 0)") {
    Eigen::MatrixXd D(9, 2);
    D.col(0).setOnes();
    D.col(1).setZero();

    const auto oracle = testing::gram_singular_pairs(D);
    CHECK(oracle[0].sigma == doctest::Approx(3.0));
    CHECK(oracle[1].sigma == doctest::Approx(0.0));

    const auto purposes = extract(D, 1.0, 4);
    REQUIRE(purposes.size() == 2);
    CHECK(purposes[0].singular_value == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(purposes[0].sign == +1);
    CHECK(purposes[0].direction.isApprox(Eigen::Vector2d(1, 0)));
    CHECK(purposes[1].sign == -1);
    CHECK(purposes[1].direction.isApprox(Eigen::Vector2d(-1, 0)));
    CHECK(purposes[0].source_phase == 4);

    // sigma must be strictly greater than kappa.
    CHECK(extract(D, 3.0 + 1e-9, 0).empty());
}

TEST_CASE("random-walk spectrum agrees with the Gram oracle") {
    const Eigen::MatrixXd D = random_walk_dataset(5);
    const auto oracle = testing::gram_singular_pairs(D);
    const auto purposes = extract(D, 1.0);

    std::size_t expected = 0;
    for (const auto& p : oracle) expected += p.sigma > 1.0 ? 2 : 0;
    REQUIRE(purposes.size() == expected);
    REQUIRE(!purposes.empty());

    for (std::size_t k = 0; k < purposes.size(); k += 2) {
        const auto& ref = oracle[k / 2];
        CHECK(purposes[k].singular_value == doctest::Approx(ref.sigma).epsilon(1e-9));
        // Directions agree up to sign where the spectrum is well separated.
        const double gap_prev = k == 0 ? 1e9 : oracle[k / 2 - 1].sigma - ref.sigma;
        const double gap_next = k / 2 + 1 < oracle.size() ? ref.sigma - oracle[k / 2 + 1].sigma : 1e9;
        if (std::min(gap_prev, gap_next) > 1e-3)
            CHECK(std::abs(purposes[k].direction.dot(ref.direction)) == doctest::Approx(1.0).epsilon(1e-8));
    }

    // Bit 0 flips on every step, so the leading purpose is dominated by the
    // lowest bit (the last component).
    Eigen::Index top = 0;
    oracle[0].direction.cwiseAbs().maxCoeff(&top);
    CHECK(top == 11);
    purposes[0].direction.cwiseAbs().maxCoeff(&top);
    CHECK(top == 11);
}

TEST_CASE("extract invariants on random datasets") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Eigen::MatrixXd D = random_walk_dataset(seed, 200 + 40 * static_cast<int>(seed));
        const auto all = extract(D, 0.0);
        // Each retained sigma appears twice; with kappa = 0 the squares sum to ||D||_F^2.
        double sum_sq = 0.0;
        for (std::size_t k = 0; k < all.size(); k += 2) {
            CHECK(all[k].singular_value == all[k + 1].singular_value);
            CHECK(all[k].sign == +1);
            CHECK(all[k + 1].sign == -1);
            CHECK((all[k].direction + all[k + 1].direction).norm() == 0.0);
            sum_sq += all[k].singular_value * all[k].singular_value;
        }
        CHECK(sum_sq == doctest::Approx(D.squaredNorm()).epsilon(1e-6));

        const auto kept = extract(D, 1.0);
        for (std::size_t a = 0; a < kept.size(); ++a) {
            CHECK(kept[a].direction.norm() == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(kept[a].singular_value > 1.0);
            if (a > 0) CHECK(kept[a - 1].singular_value >= kept[a].singular_value);
            for (std::size_t b = a + 2 - a % 2; b < kept.size(); b += 2)
                CHECK(std::abs(kept[a].direction.dot(kept[b].direction)) < 1e-6);
        }

        const auto again = extract(D, 1.0);
        REQUIRE(again.size() == kept.size());
        for (std::size_t a = 0; a < kept.size(); ++a) {
            CHECK(again[a].singular_value == kept[a].singular_value);
            CHECK(again[a].direction == kept[a].direction);
        }
    }
}

TEST_CASE("ties in sigma are ordered by canonical vector") {
    // Orthogonal rows with equal norms: sigma = 2 twice.
    Eigen::MatrixXd D(8, 2);
    D << 1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 1, 0, 1;
    const auto p = extract(D, 1.0);
    REQUIRE(p.size() == 4);
    CHECK(p[0].singular_value == doctest::Approx(2.0));
    CHECK(p[2].singular_value == doctest::Approx(2.0));
    CHECK(p[0].direction.isApprox(Eigen::Vector2d(0, 1)));
    CHECK(p[2].direction.isApprox(Eigen::Vector2d(1, 0)));
}
