#pragma once

#include "resnmtf/model.hpp"

#include <vector>

namespace resnmtf {

/// Jaccard index of the cell sets R_a x C_a and R_b x C_b, computed from
/// set sizes. Two empty biclusters score 0.
double jaccard(const Bicluster& a, const Bicluster& b);

/// Jaccard index of the row sets alone.
double row_jaccard(const Bicluster& a, const Bicluster& b);

/// Mean over the non-empty found biclusters of their best Jaccard match in
/// truth; 0 when nothing was found.
double relevance(const ViewBiclustering& found, const ViewBiclustering& truth);

/// Mean over the non-empty true biclusters of their best match in found.
double recovery(const ViewBiclustering& found, const ViewBiclustering& truth);

/// Harmonic mean of recovery and relevance; 0 when both are 0.
double f_score(double recovery, double relevance);
double f_score(const ViewBiclustering& found, const ViewBiclustering& truth);

/// Best Jaccard of reference bicluster l against any candidate; 0 if
/// reference l is empty.
double bicluster_relevance(std::size_t l, const ViewBiclustering& reference,
                           const ViewBiclustering& candidate);

/// Correct selection rate 1 - |k_hat - k_true| / (k_hat + k_true + 1).
double csr(int k_hat, int k_true);

struct ViewScores {
    double relevance = 0.0;
    double recovery = 0.0;
    double f_score = 0.0;
    double csr = 0.0;
};

struct EvalReport {
    double relevance = 0.0;
    double recovery = 0.0;
    double f_score = 0.0;
    double csr = 0.0;
    std::vector<ViewScores> per_view;
};

/// Scores each view against truth and averages uniformly. With rows_only,
/// column sets are ignored (every non-empty bicluster spans all columns).
EvalReport multiview_scores(const MultiViewBiclustering& found,
                            const MultiViewBiclustering& truth, bool rows_only = false);

}  // namespace resnmtf
