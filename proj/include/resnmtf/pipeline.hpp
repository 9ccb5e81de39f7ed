#pragma once

#include "resnmtf/bisilhouette.hpp"
#include "resnmtf/model.hpp"
#include "resnmtf/spurious.hpp"

#include <cstdint>
#include <vector>

namespace resnmtf {

/// One candidate K: fit, extraction, spurious removal and its bisilhouette.
struct CandidateResult {
    int k = 0;
    double bisilhouette = 0.0;
    std::vector<std::size_t> counts;   // non-empty biclusters per view after spurious removal
    int iterations = 0;
    bool converged = false;
    MultiViewBiclustering raw;         // straight from the factors
    MultiViewBiclustering filtered;    // after spurious removal
    SpuriousReport spurious;
};

CandidateResult fit_fixed_k(const MultiViewDataset& data, int k, const RestrictionWeights& w,
                            const PipelineConfig& cfg);

struct SelectionTrace {
    std::vector<CandidateResult> candidates;   // in the order tried, K ascending
    int k_hat = 0;
    /// The argmax was still at the top of the range when no larger K could be tried.
    bool range_cap_reached = false;

    const CandidateResult& selected() const;
};

struct ScoreReport {
    MultiViewBisilhouette bisilhouette;                 // of the final biclustering
    std::vector<std::vector<double>> stability_relevance;   // empty when stability is off
};

struct PipelineResult {
    MultiViewBiclustering biclustering;
    SelectionTrace trace;
    ScoreReport scores;
};

/// Sweeps K from cfg.k_min, extending upwards while the best score sits at
/// the top of the range, then stability-filters the selected result.
PipelineResult run(const MultiViewDataset& data, const RestrictionWeights& w,
                   const PipelineConfig& cfg);

/// Model-order selection only (no stability filtering).
SelectionTrace select_k(const MultiViewDataset& data, const RestrictionWeights& w,
                        const PipelineConfig& cfg);

/// True when, for every pair of views and every bicluster index, the two
/// views' row counts agree.
bool restrictions_indicator(const MultiViewBiclustering& bc);

struct SweepRow {
    double value = 0.0;
    double bisilhouette = 0.0;   // of the final biclustering
    int k_hat = 0;
    std::vector<std::size_t> counts;
    bool restrictions = false;
    MultiViewBiclustering biclustering;
};

struct SweepTable {
    RestrictionWeights::Kind kind = RestrictionWeights::Kind::phi;
    std::vector<SweepRow> rows;
    std::size_t best = 0;   // first row with the highest bisilhouette
};

/// Runs the pipeline once per value, broadcasting the value to every pair
/// of the swept kind (other kinds taken from `base`). Each value gets its
/// own seed derived from cfg.seed and its position.
SweepTable sweep_restriction(const MultiViewDataset& data, RestrictionWeights::Kind kind,
                             const std::vector<double>& values, const RestrictionWeights& base,
                             const PipelineConfig& cfg);

struct OmegaSweepRow {
    double omega = 0.0;
    double bisilhouette = 0.0;
    std::vector<std::size_t> counts;
    MultiViewBiclustering biclustering;
};

/// One selection and one set of stability refits, thresholded at each omega.
std::vector<OmegaSweepRow> sweep_omega(const MultiViewDataset& data, const RestrictionWeights& w,
                                       const std::vector<double>& omegas, const PipelineConfig& cfg);

}  // namespace resnmtf
