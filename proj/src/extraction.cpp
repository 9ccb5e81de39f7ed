#include "resnmtf/extraction.hpp"

#include "resnmtf/errors.hpp"

#include <algorithm>

namespace resnmtf {

namespace {

std::vector<IndexSet> threshold_columns(const Matrix& m) {
    std::vector<IndexSet> sets(static_cast<std::size_t>(m.cols()));
    if (m.rows() == 0) return sets;
    const double level = 1.0 / static_cast<double>(m.rows());
    for (Index k = 0; k < m.cols(); ++k)
        for (Index i = 0; i < m.rows(); ++i)
            if (m(i, k) > level) sets[static_cast<std::size_t>(k)].push_back(i);
    return sets;
}

}  // namespace

std::vector<IndexSet> assign_row_clusters(const Matrix& F) { return threshold_columns(F); }

std::vector<IndexSet> assign_column_clusters(const Matrix& G) { return threshold_columns(G); }

std::vector<Index> match_row_clusters(const Matrix& S) {
    std::vector<Index> match(static_cast<std::size_t>(S.cols()), 0);
    for (Index k = 0; k < S.cols(); ++k) {
        Index best = 0;
        for (Index j = 1; j < S.rows(); ++j)
            if (S(j, k) > S(best, k)) best = j;
        match[static_cast<std::size_t>(k)] = best;
    }
    return match;
}

ViewBiclustering match_biclusters(const Matrix& S, const std::vector<IndexSet>& rowsets,
                                  const std::vector<IndexSet>& colsets) {
    if (static_cast<Index>(rowsets.size()) != S.rows() ||
        static_cast<Index>(colsets.size()) != S.cols())
        throw DimensionMismatch("S does not match the number of row/column clusters");
    const std::vector<Index> match = match_row_clusters(S);
    ViewBiclustering out(colsets.size());
    for (std::size_t k = 0; k < colsets.size(); ++k) {
        const IndexSet& rows = rowsets[static_cast<std::size_t>(match[k])];
        if (rows.empty() || colsets[k].empty()) continue;
        out[k] = Bicluster{rows, colsets[k]};
    }
    return out;
}

ViewBiclustering extract_view(const ViewFactors& f) {
    return match_biclusters(f.S, assign_row_clusters(f.F), assign_column_clusters(f.G));
}

MultiViewBiclustering extract(const TriFactors& factors) {
    MultiViewBiclustering bc;
    bc.views.reserve(factors.size());
    for (const ViewFactors& f : factors) bc.views.push_back(extract_view(f));
    return bc;
}

bool single_row_match(const Matrix& S) {
    if (S.cols() < 2) return false;
    const std::vector<Index> match = match_row_clusters(S);
    return std::all_of(match.begin(), match.end(), [&](Index j) { return j == match.front(); });
}

}  // namespace resnmtf
