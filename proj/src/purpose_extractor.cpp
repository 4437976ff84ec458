#include "pod/purpose_extractor.hpp"

#include "pod/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

namespace pod {

Eigen::VectorXd canonicalize(const Eigen::VectorXd& e) {
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        if (e[i] > 0.0) return e;
        if (e[i] < 0.0) return -e;
    }
    throw ContractViolation("cannot canonicalize the zero vector");
}

std::vector<Eigenpurpose> extract(const Eigen::MatrixXd& D, double kappa, int source_phase) {
    if (D.rows() == 0 || D.cols() == 0) throw EmptyDataset();
    if (!(kappa >= 0.0)) throw ContractViolation("kappa must be nonnegative");
    if (!D.allFinite()) throw NumericalFailure("difference matrix has non-finite entries");

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw NumericalFailure("SVD did not converge");

    const Eigen::VectorXd& sigma = svd.singularValues();
    const Eigen::MatrixXd& V = svd.matrixV();

    struct Retained {
        double sigma;
        Eigen::VectorXd canonical;
    };
    std::vector<Retained> retained;
    for (Eigen::Index j = 0; j < sigma.size(); ++j) {
        if (!(sigma[j] > kappa)) continue;
        Eigen::VectorXd v = V.col(j);
        v.normalize();
        retained.push_back({sigma[j], canonicalize(v)});
    }

    std::stable_sort(retained.begin(), retained.end(), [](const Retained& a, const Retained& b) {
        if (a.sigma != b.sigma) return a.sigma > b.sigma;
        return std::lexicographical_compare(a.canonical.begin(), a.canonical.end(),
                                            b.canonical.begin(), b.canonical.end());
    });

    std::vector<Eigenpurpose> out;
    out.reserve(2 * retained.size());
    for (const auto& r : retained) {
        out.push_back({r.canonical, r.sigma, +1, source_phase});
        out.push_back({-r.canonical, r.sigma, -1, source_phase});
    }
    return out;
}

void write_purposes_csv(const std::filesystem::path& path, std::span<const Eigenpurpose> purposes) {
    std::ofstream out(path);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    const Eigen::Index dim = purposes.empty() ? 0 : purposes.front().direction.size();
    out << "sign,sigma";
    for (Eigen::Index i = 0; i < dim; ++i) out << ",v_" << i;
    out << '\n';
    for (const auto& p : purposes) {
        out << (p.sign > 0 ? "+1" : "-1") << ',' << fmt::format("{:.9f}", p.singular_value);
        for (Eigen::Index i = 0; i < p.direction.size(); ++i)
            out << ',' << fmt::format("{:.9f}", p.direction[i] == 0.0 ? 0.0 : p.direction[i]);
        out << '\n';
    }
    if (!out) throw IoError(path.string(), "write failed");
}

}  // namespace pod
