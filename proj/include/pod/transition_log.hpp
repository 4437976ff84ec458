#pragma once

#include "pod/feature_codec.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <vector>

namespace pod {

// The difference dataset D collected during one phase. Rows are kept in
// insertion order and duplicates are retained: singular values weight how
// often each direction of change was seen.
class DiffDataset {
public:
    explicit DiffDataset(int phase_index = 0) : phase_index_(phase_index) {}

    int phase_index() const noexcept { return phase_index_; }
    std::size_t rows() const noexcept { return rows_.size(); }
    bool empty() const noexcept { return rows_.empty(); }
    const std::vector<DiffVector>& data() const noexcept { return rows_; }

    // Throws ContractViolation if v's length differs from existing rows.
    void record(DiffVector v);

    // Dense rows x dim matrix; throws EmptyDataset when there are no rows.
    Eigen::MatrixXd as_matrix() const;

    // One difference vector per line, comma-separated signed integers.
    void write_csv(const std::filesystem::path& path) const;

private:
    int phase_index_;
    std::vector<DiffVector> rows_;
};

}  // namespace pod
