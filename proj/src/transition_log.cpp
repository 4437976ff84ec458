#include "pod/transition_log.hpp"

#include "pod/errors.hpp"

#include <fstream>
#include <string>

namespace pod {

void DiffDataset::record(DiffVector v) {
    if (!rows_.empty() && rows_.front().size() != v.size())
        throw ContractViolation("diff row of length " + std::to_string(v.size()) +
                                " does not match dataset width " +
                                std::to_string(rows_.front().size()));
    rows_.push_back(std::move(v));
}

Eigen::MatrixXd DiffDataset::as_matrix() const {
    if (rows_.empty()) throw EmptyDataset();
    const auto n = static_cast<Eigen::Index>(rows_.size());
    const auto dim = static_cast<Eigen::Index>(rows_.front().size());
    Eigen::MatrixXd m(n, dim);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            m(i, j) = rows_[static_cast<std::size_t>(i)].values[static_cast<std::size_t>(j)];
    return m;
}

void DiffDataset::write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    for (const auto& row : rows_) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << ',';
            out << static_cast<int>(row.values[j]);
        }
        out << '\n';
    }
    if (!out) throw IoError(path.string(), "write failed");
}

}  // namespace pod
