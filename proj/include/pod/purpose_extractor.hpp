#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <span>
#include <vector>

namespace pod {

// A unit direction of change in feature space, one signed right-singular
// vector of the difference dataset.
struct Eigenpurpose {
    Eigen::VectorXd direction;
    double singular_value = 0.0;
    int sign = +1;
    int source_phase = 0;
};

// Flips the sign so that the first nonzero component is positive.
// Throws ContractViolation for the zero vector.
Eigen::VectorXd canonicalize(const Eigen::VectorXd& e);

// Dense SVD of D; every right-singular vector whose singular value is strictly
// greater than kappa yields two purposes, +e and -e. Output is ordered by
// singular value (descending), then by the canonical vector
// (lexicographically ascending), with + before -.
//
// Throws EmptyDataset for a matrix without rows and NumericalFailure when
// the decomposition does not succeed.
std::vector<Eigenpurpose> extract(const Eigen::MatrixXd& D, double kappa, int source_phase = 0);

// Columns: sign, sigma, v_0 .. v_{dim-1}.
void write_purposes_csv(const std::filesystem::path& path, std::span<const Eigenpurpose> purposes);

}  // namespace pod
