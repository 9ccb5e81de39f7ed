#pragma once

#include "resnmtf/model.hpp"

#include <random>

namespace testing {

inline resnmtf::Matrix random_positive(resnmtf::Index rows, resnmtf::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    resnmtf::Matrix m(rows, cols);
    for (resnmtf::Index j = 0; j < cols; ++j)
        for (resnmtf::Index i = 0; i < rows; ++i) m(i, j) = u(rng);
    return m;
}

// Block-diagonal matrix: block b covers rows/cols [b*r, (b+1)*r) x [b*c, (b+1)*c).
inline resnmtf::Matrix block_diagonal(int blocks, resnmtf::Index r, resnmtf::Index c, double value,
                                      double background = 0.0) {
    resnmtf::Matrix m = resnmtf::Matrix::Constant(blocks * r, blocks * c, background);
    for (int b = 0; b < blocks; ++b) m.block(b * r, b * c, r, c).setConstant(value + b);
    return m;
}

}  // namespace testing
