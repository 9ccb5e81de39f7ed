#pragma once

#include "resnmtf/model.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace resnmtf {

/// Uniform permutation of all entries of the view.
Matrix shuffle_view(const Matrix& x, std::mt19937_64& rng);

/// Jensen-Shannon divergence (base 2, so in [0, 1]) between the histograms
/// of two samples over `bins` equal-width bins spanning the pooled range.
double jsd(std::span<const double> a, std::span<const double> b, int bins = 50);

/// F factors fitted to entry-shuffled copies of the data: f_hat[m][v].
struct NoiseFitEnsemble {
    std::vector<std::vector<Matrix>> f_hat;

    std::size_t repeats() const noexcept { return f_hat.size(); }
};

/// Refits K biclusters on cfg.n_repeats independent per-view shuffles.
NoiseFitEnsemble build_noise_ensemble(const MultiViewDataset& data, int k,
                                      const RestrictionWeights& w, const PipelineConfig& cfg,
                                      std::uint64_t seed);

/// Largest JSD between columns of two different shuffled fits of view v.
double null_threshold(const NoiseFitEnsemble& ensemble, std::size_t v, int bins = 50);

/// Mean JSD between `column` and every column of every shuffled fit of view v.
double bicluster_test_score(std::span<const double> column, const NoiseFitEnsemble& ensemble,
                            std::size_t v, int bins = 50);

struct SpuriousReport {
    std::vector<double> threshold;                  // per view
    std::vector<std::vector<double>> test_scores;   // per view, per bicluster
};

struct SpuriousResult {
    MultiViewBiclustering biclustering;
    SpuriousReport report;
};

/// Empties bicluster l of view v when its test score falls below the view's
/// null threshold. Bicluster l is tested through the F column of the row
/// cluster it was matched to.
SpuriousResult remove_spurious(const MultiViewDataset& data, const MultiViewBiclustering& bc,
                               const TriFactors& factors, const NoiseFitEnsemble& ensemble,
                               int bins = 50);

/// Builds the ensemble (same K, same weights) and applies the test.
SpuriousResult remove_spurious(const MultiViewDataset& data, const MultiViewBiclustering& bc,
                               const TriFactors& factors, int k, const RestrictionWeights& w,
                               const PipelineConfig& cfg, std::uint64_t seed);

}  // namespace resnmtf
