#pragma once

#include "resnmtf/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace resnmtf {

/// Added to every multiplicative-update denominator.
inline constexpr double kDenominatorFloor = 1e-10;

struct InitConfig {
    double sigma_n = 0.05;
    std::uint64_t seed = 0;
};

struct ConvergenceState {
    int iteration = 0;
    double error = 0.0;           // mean relative error over views
    double previous_error = 0.0;
    std::vector<double> view_errors;
};

struct SolveResult {
    TriFactors factors;
    std::vector<ConvergenceState> trace;
    bool converged = false;

    int iterations() const noexcept { return static_cast<int>(trace.size()); }
};

/// SVD-based start for one view: F and G are the absolute leading singular
/// vectors scaled to unit column sums, S absorbs those sums around the
/// singular values plus |N(0, sigma_n^2)| noise, and Λ = M = 1.
ViewFactors svd_initialise(const Matrix& view, int k, const InitConfig& cfg);

/// One full sweep of the multiplicative updates (F, S, G, Λ, M per view,
/// views in ascending order, coupling terms read the freshest factors).
TriFactors update_step(const MultiViewDataset& data, const TriFactors& factors,
                       const RestrictionWeights& w);

/// Per-view ||X - F S Gᵀ||² / ||X||² and their mean.
ConvergenceState relative_error(const MultiViewDataset& data, const TriFactors& factors);

/// Data fit plus coupling penalties (the constrained problem's objective,
/// without Lagrangian terms).
double objective(const MultiViewDataset& data, const TriFactors& factors,
                 const RestrictionWeights& w);

/// Scales every F and G column to unit sum and folds the scale into S, so
/// F S Gᵀ is unchanged. Zero columns are left alone.
void normalise_columns(ViewFactors& f);

/// Throws DimensionMismatch if a non-zero weight couples views whose
/// coupled factors have different shapes.
void check_coupling_shapes(const MultiViewDataset& data, const RestrictionWeights& w);

/// Fits K biclusters. Each view is initialised with its own seed; the loop
/// stops when successive mean errors differ by less than cfg.tol or after
/// cfg.max_iters sweeps.
SolveResult solve(const MultiViewDataset& data, int k, const RestrictionWeights& w,
                  const PipelineConfig& cfg, std::span<const std::uint64_t> view_seeds);

/// As above, with per-view seeds derived from cfg.seed.
SolveResult solve(const MultiViewDataset& data, int k, const RestrictionWeights& w,
                  const PipelineConfig& cfg);

}  // namespace resnmtf
