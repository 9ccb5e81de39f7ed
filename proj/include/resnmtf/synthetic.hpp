#pragma once

#include "resnmtf/model.hpp"

#include <cstdint>
#include <vector>

namespace resnmtf {

struct SyntheticConfig {
    Index n_rows = 200;
    std::vector<Index> n_cols = {100, 250};
    int k = 4;
    double mu = 5.0;             // block mean
    double sigma_b = 1.0;        // within-block standard deviation
    double sigma = 5.0;          // noise standard deviation
    double overlap = 0.0;        // r_o
    double nonexhaustive = 0.0;  // r_e
    bool offset_sizing = false;   // split n - K, then add one per bicluster
    std::uint64_t seed = 0;

    void validate() const;
};

/// Block sizes in decreasing order. Ratio parts start at 4:3 and the first
/// largest part is split in two (ceil, floor) for each extra bicluster;
/// the rounding remainder goes to the first of the smallest parts.
std::vector<Index> split_sizes(Index total, int k);

struct SyntheticData {
    MultiViewDataset data;
    MultiViewBiclustering truth;
    /// Shuffled row p holds original row row_order[p]; shared by all views.
    std::vector<Index> row_order;
    /// Per view, shuffled column p holds original column col_order[v][p].
    std::vector<std::vector<Index>> col_order;
};

/// Number of rows/columns that carry bicluster structure.
Index structured_extent(Index n, double nonexhaustive);

SyntheticData generate(const SyntheticConfig& cfg);

}  // namespace resnmtf
