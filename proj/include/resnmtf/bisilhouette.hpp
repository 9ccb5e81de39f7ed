#pragma once

#include "resnmtf/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace resnmtf {

/// Euclidean, Manhattan or cosine (1 - cos θ) distance. Cosine distance
/// involving a zero vector is 1.
double pairwise_distance(std::span<const double> x, std::span<const double> y, Distance d);

/// Silhouette coefficients of the rows of clusters[designated], in that
/// cluster's order, with `m`'s rows as points. Clusters with identical
/// membership count once; empty clusters are ignored. Members of singleton
/// clusters get 0.
std::vector<double> silhouette_coefficients(const Matrix& m, const std::vector<IndexSet>& clusters,
                                            std::size_t designated, Distance d);

/// B_k: mean silhouette of R_k's rows over the columns C_k, with the row
/// sets of all non-empty biclusters as the clustering.
double bicluster_score(const Matrix& x, std::size_t k, const ViewBiclustering& bc, Distance d);

/// Mean of the non-zero scores minus twice their population standard
/// deviation; 0 if every score is 0.
double aggregate_scores(std::span<const double> per_bicluster);

struct RowCoefficient {
    Index row;
    double value;
};

struct BisilhouetteReport {
    std::vector<double> per_bicluster;
    double overall = 0.0;
    /// Per bicluster, the coefficient of each of its rows.
    std::vector<std::vector<RowCoefficient>> coefficients;
    Distance distance = Distance::euclidean;
    /// True when random row clusters were added because fewer than three
    /// distinct row clusters existed.
    bool augmented = false;
};

inline constexpr int kAugmentationRepeats = 10;
inline constexpr double kAugmentationRate = 0.1;
inline constexpr int kAugmentationAttempts = 100;

/// Bisilhouette of one view. Empty biclusters score 0 and an all-empty
/// biclustering scores 0 overall. With fewer than three distinct row
/// clusters, random clusters (each row joins with probability 0.1) are
/// added and the score is averaged over 10 such augmentations.
BisilhouetteReport bisilhouette(const Matrix& x, const ViewBiclustering& bc, Distance d,
                                std::uint64_t seed);

struct MultiViewBisilhouette {
    std::vector<BisilhouetteReport> per_view;
    double overall = 0.0;   // uniform mean over views
};

MultiViewBisilhouette bisilhouette(const MultiViewDataset& data, const MultiViewBiclustering& bc,
                                   Distance d, std::uint64_t seed);

}  // namespace resnmtf
