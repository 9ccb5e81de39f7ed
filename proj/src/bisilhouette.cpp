#include "resnmtf/bisilhouette.hpp"

#include "resnmtf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace resnmtf {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double pairwise_distance(std::span<const double> x, std::span<const double> y, Distance d) {
    if (x.size() != y.size())
        throw LengthMismatch("vectors of length " + std::to_string(x.size()) + " and " +
                             std::to_string(y.size()));
    switch (d) {
        case Distance::euclidean: {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
            return std::sqrt(s);
        }
        case Distance::manhattan: {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
            return s;
        }
        case Distance::cosine: {
            double dot = 0.0, nx = 0.0, ny = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                dot += x[i] * y[i];
                nx += x[i] * x[i];
                ny += y[i] * y[i];
            }
            if (nx == 0.0 || ny == 0.0) return 1.0;
            return std::max(0.0, 1.0 - dot / (std::sqrt(nx) * std::sqrt(ny)));
        }
    }
    return 0.0;
}

namespace {

RowMajorMatrix select_columns(const Matrix& x, const IndexSet& cols) {
    RowMajorMatrix out(x.rows(), static_cast<Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = x.col(cols[j]);
    return out;
}

// Non-empty clusters with duplicates (by membership) removed, first occurrence kept.
std::vector<IndexSet> distinct_clusters(const std::vector<IndexSet>& clusters) {
    std::vector<IndexSet> out;
    for (const IndexSet& c : clusters)
        if (!c.empty() && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    return out;
}

std::span<const double> row_span(const RowMajorMatrix& m, Index i) {
    return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

double mean_distance(const std::vector<double>& dist, const IndexSet& members) {
    double s = 0.0;
    for (Index l : members) s += dist[static_cast<std::size_t>(l)];
    return s / static_cast<double>(members.size());
}

// Coefficients for the rows of `own`; `clusters` must already be distinct
// and contain `own`.
std::vector<double> coefficients(const RowMajorMatrix& points, const IndexSet& own,
                                 const std::vector<IndexSet>& clusters, Distance d) {
    std::vector<double> s(own.size(), 0.0);
    if (own.size() == 1) return s;

    std::vector<Index> needed;
    for (const IndexSet& c : clusters) needed.insert(needed.end(), c.begin(), c.end());
    needed = make_index_set(std::move(needed));

    std::vector<double> dist(static_cast<std::size_t>(points.rows()), 0.0);
    for (std::size_t p = 0; p < own.size(); ++p) {
        const Index i = own[p];
        for (Index l : needed)
            dist[static_cast<std::size_t>(l)] =
                l == i ? 0.0 : pairwise_distance(row_span(points, i), row_span(points, l), d);

        const double a = mean_distance(dist, own) * static_cast<double>(own.size()) /
                         static_cast<double>(own.size() - 1);
        double b = std::numeric_limits<double>::infinity();
        for (const IndexSet& c : clusters)
            if (c != own) b = std::min(b, mean_distance(dist, c));
        const double denom = std::max(a, b);
        s[p] = denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return s;
}

double mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<IndexSet> row_sets(const ViewBiclustering& bc) {
    std::vector<IndexSet> sets;
    for (const Bicluster& b : bc)
        if (!b.empty()) sets.push_back(b.rows);
    return sets;
}

}  // namespace

std::vector<double> silhouette_coefficients(const Matrix& m, const std::vector<IndexSet>& clusters,
                                            std::size_t designated, Distance d) {
    const IndexSet& own = clusters.at(designated);
    if (own.empty()) throw EmptyBicluster("designated cluster is empty");
    for (const IndexSet& c : clusters)
        for (Index i : c)
            if (i < 0 || i >= m.rows()) throw DimensionMismatch("cluster member out of range");
    const std::vector<IndexSet> distinct = distinct_clusters(clusters);
    if (distinct.size() < 2)
        throw DegenerateClustering("need at least two distinct non-empty clusters");
    const RowMajorMatrix points = m;
    return coefficients(points, own, distinct, d);
}

double bicluster_score(const Matrix& x, std::size_t k, const ViewBiclustering& bc, Distance d) {
    const Bicluster& b = bc.at(k);
    if (b.empty()) throw EmptyBicluster("bicluster " + std::to_string(k + 1) + " is empty");
    const std::vector<IndexSet> distinct = distinct_clusters(row_sets(bc));
    if (distinct.size() < 2)
        throw DegenerateClustering("need at least two distinct non-empty row clusters");
    return mean(coefficients(select_columns(x, b.cols), b.rows, distinct, d));
}

double aggregate_scores(std::span<const double> per_bicluster) {
    std::vector<double> nonzero;
    for (double s : per_bicluster)
        if (s != 0.0) nonzero.push_back(s);
    if (nonzero.empty()) return 0.0;
    const double m = mean(nonzero);
    double var = 0.0;
    for (double s : nonzero) var += (s - m) * (s - m);
    var /= static_cast<double>(nonzero.size());
    return m - 2.0 * std::sqrt(var);
}

BisilhouetteReport bisilhouette(const Matrix& x, const ViewBiclustering& bc, Distance d,
                                std::uint64_t seed) {
    BisilhouetteReport report;
    report.distance = d;
    report.per_bicluster.assign(bc.size(), 0.0);
    report.coefficients.resize(bc.size());

    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < bc.size(); ++k)
        if (!bc[k].empty()) active.push_back(k);
    if (active.empty()) return report;

    for (std::size_t k : active)
        for (Index i : bc[k].rows)
            if (i < 0 || i >= x.rows()) throw DimensionMismatch("bicluster row out of range");

    std::vector<RowMajorMatrix> subsets;
    subsets.reserve(active.size());
    for (std::size_t k : active) {
        for (Index j : bc[k].cols)
            if (j < 0 || j >= x.cols()) throw DimensionMismatch("bicluster column out of range");
        subsets.push_back(select_columns(x, bc[k].cols));
    }

    const std::vector<IndexSet> distinct = distinct_clusters(row_sets(bc));

    auto score_with = [&](const std::vector<IndexSet>& clusters, std::vector<double>& per_k,
                          std::vector<std::vector<double>>& coefs) {
        for (std::size_t a = 0; a < active.size(); ++a) {
            const std::size_t k = active[a];
            coefs[k] = coefficients(subsets[a], bc[k].rows, clusters, d);
            per_k[k] = mean(coefs[k]);
        }
    };

    auto fill_coefficients = [&](const std::vector<std::vector<double>>& coefs) {
        for (std::size_t k : active) {
            report.coefficients[k].clear();
            for (std::size_t p = 0; p < bc[k].rows.size(); ++p)
                report.coefficients[k].push_back({bc[k].rows[p], coefs[k][p]});
        }
    };

    if (distinct.size() >= 3) {
        std::vector<std::vector<double>> coefs(bc.size());
        score_with(distinct, report.per_bicluster, coefs);
        report.overall = aggregate_scores(report.per_bicluster);
        fill_coefficients(coefs);
        return report;
    }

    report.augmented = true;
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution join(kAugmentationRate);
    std::vector<std::vector<double>> coef_sum(bc.size());
    for (std::size_t k : active) coef_sum[k].assign(bc[k].rows.size(), 0.0);
    double overall_sum = 0.0;

    for (int rep = 0; rep < kAugmentationRepeats; ++rep) {
        std::vector<IndexSet> clusters = distinct;
        int attempts = 0;
        while (clusters.size() < 3 && attempts < kAugmentationAttempts) {
            IndexSet extra;
            for (Index i = 0; i < x.rows(); ++i)
                if (join(rng)) extra.push_back(i);
            if (extra.empty() || std::find(clusters.begin(), clusters.end(), extra) != clusters.end()) {
                ++attempts;
                continue;
            }
            clusters.push_back(std::move(extra));
        }
        // Degenerate draws contribute a zero score for this repetition.
        if (clusters.size() < 3) continue;

        std::vector<double> per_k(bc.size(), 0.0);
        std::vector<std::vector<double>> coefs(bc.size());
        score_with(clusters, per_k, coefs);
        overall_sum += aggregate_scores(per_k);
        for (std::size_t k : active) {
            report.per_bicluster[k] += per_k[k];
            for (std::size_t p = 0; p < coefs[k].size(); ++p) coef_sum[k][p] += coefs[k][p];
        }
    }

    const double reps = static_cast<double>(kAugmentationRepeats);
    for (double& s : report.per_bicluster) s /= reps;
    for (auto& c : coef_sum)
        for (double& s : c) s /= reps;
    report.overall = overall_sum / reps;
    fill_coefficients(coef_sum);
    return report;
}

MultiViewBisilhouette bisilhouette(const MultiViewDataset& data, const MultiViewBiclustering& bc,
                                   Distance d, std::uint64_t seed) {
    if (bc.n_views() != data.size())
        throw DimensionMismatch("biclustering and data have different view counts");
    MultiViewBisilhouette out;
    for (std::size_t v = 0; v < data.size(); ++v) {
        out.per_view.push_back(bisilhouette(data.view(v), bc.views[v], d, derive_seed(seed, v)));
        out.overall += out.per_view.back().overall;
    }
    if (!data.size()) return out;
    out.overall /= static_cast<double>(data.size());
    return out;
}

}  // namespace resnmtf
