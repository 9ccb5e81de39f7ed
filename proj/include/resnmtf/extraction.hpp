#pragma once

#include "resnmtf/model.hpp"

#include <vector>

namespace resnmtf {

/// Row cluster k = { i : F(i,k) > 1/n_r }.
std::vector<IndexSet> assign_row_clusters(const Matrix& F);

/// Column cluster k = { j : G(j,k) > 1/n_c }.
std::vector<IndexSet> assign_column_clusters(const Matrix& G);

/// Row cluster matched to column cluster k: argmax_j S(j,k), smallest j on ties.
std::vector<Index> match_row_clusters(const Matrix& S);

/// Bicluster k pairs row cluster argmax_j S(j,k) with column cluster k.
/// A bicluster with an empty side is emptied on both sides.
ViewBiclustering match_biclusters(const Matrix& S, const std::vector<IndexSet>& rowsets,
                                  const std::vector<IndexSet>& colsets);

ViewBiclustering extract_view(const ViewFactors& f);
MultiViewBiclustering extract(const TriFactors& factors);

/// True when every column cluster of S is matched to the same row cluster.
bool single_row_match(const Matrix& S);

}  // namespace resnmtf
