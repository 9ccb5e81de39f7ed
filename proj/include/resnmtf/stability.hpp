#pragma once

#include "resnmtf/model.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace resnmtf {

struct StabilityConfig {
    double omega = 0.4;
    int n_s = 5;
    double alpha = 0.9;

    void validate() const;
};

/// floor(alpha * n) indices drawn without replacement, returned sorted.
IndexSet subsample_indices(Index n, double alpha, std::mt19937_64& rng);

/// Group id per view: views linked (transitively) by a positive weight of
/// `kind` share a group and therefore share subsample indices.
std::vector<std::size_t> coupling_groups(const RestrictionWeights& w, RestrictionWeights::Kind kind);

/// Bicluster restricted to the sampled rows/columns, in subsample coordinates.
Bicluster restrict_bicluster(const Bicluster& b, const IndexSet& rows, const IndexSet& cols);

struct StabilityResult {
    MultiViewBiclustering biclustering;
    /// Per view, per bicluster, mean relevance over the n_s refits.
    std::vector<std::vector<double>> mean_relevance;
};

/// Mean relevance of each bicluster to refits on subsamples; no thresholding.
std::vector<std::vector<double>> stability_relevance(const MultiViewDataset& data,
                                                     const MultiViewBiclustering& bc,
                                                     const RestrictionWeights& w,
                                                     const StabilityConfig& scfg,
                                                     const PipelineConfig& cfg,
                                                     std::uint64_t seed);

/// Empties every bicluster whose mean relevance is below omega.
MultiViewBiclustering apply_stability_threshold(const MultiViewBiclustering& bc,
                                                const std::vector<std::vector<double>>& mean_relevance,
                                                double omega);

StabilityResult stability_filter(const MultiViewDataset& data, const MultiViewBiclustering& bc,
                                 const RestrictionWeights& w, const StabilityConfig& scfg,
                                 const PipelineConfig& cfg, std::uint64_t seed);

}  // namespace resnmtf
