#include "resnmtf/stability.hpp"

#include "resnmtf/errors.hpp"
#include "resnmtf/extraction.hpp"
#include "resnmtf/factorisation.hpp"
#include "resnmtf/metrics.hpp"
#include "resnmtf/spurious.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace resnmtf {

void StabilityConfig::validate() const {
    if (!(omega >= 0.0 && omega <= 1.0)) throw InvalidConfig("omega must lie in [0, 1]");
    if (n_s < 1) throw InvalidConfig("n_s must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidConfig("alpha must lie in (0, 1]");
}

IndexSet subsample_indices(Index n, double alpha, std::mt19937_64& rng) {
    const auto m = static_cast<Index>(std::floor(alpha * static_cast<double>(n) + 1e-9));
    if (m < 1)
        throw DegenerateSubsample("floor(" + std::to_string(alpha) + " * " + std::to_string(n) +
                                  ") = 0");
    std::vector<Index> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), Index{0});
    IndexSet picked;
    std::sample(all.begin(), all.end(), std::back_inserter(picked), static_cast<std::size_t>(m), rng);
    return picked;   // std::sample keeps the input order
}

std::vector<std::size_t> coupling_groups(const RestrictionWeights& w, RestrictionWeights::Kind kind) {
    const std::size_t n = w.n_views();
    std::vector<std::size_t> group(n);
    std::iota(group.begin(), group.end(), std::size_t{0});
    const auto find = [&](std::size_t v) {
        while (group[v] != v) v = group[v] = group[group[v]];
        return v;
    };
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (w.pair(kind, u, v) > 0.0) group[std::max(find(u), find(v))] = std::min(find(u), find(v));
    for (std::size_t v = 0; v < n; ++v) group[v] = find(v);
    return group;
}

namespace {

IndexSet restrict_to(const IndexSet& members, const IndexSet& sample) {
    IndexSet out;
    for (Index m : members) {
        const auto it = std::lower_bound(sample.begin(), sample.end(), m);
        if (it != sample.end() && *it == m) out.push_back(static_cast<Index>(it - sample.begin()));
    }
    return out;
}

Matrix submatrix(const Matrix& x, const IndexSet& rows, const IndexSet& cols) {
    Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < rows.size(); ++i)
            out(static_cast<Index>(i), static_cast<Index>(j)) = x(rows[i], cols[j]);
    return out;
}

}  // namespace

Bicluster restrict_bicluster(const Bicluster& b, const IndexSet& rows, const IndexSet& cols) {
    return Bicluster{restrict_to(b.rows, rows), restrict_to(b.cols, cols)};
}

std::vector<std::vector<double>> stability_relevance(const MultiViewDataset& data,
                                                     const MultiViewBiclustering& bc,
                                                     const RestrictionWeights& w,
                                                     const StabilityConfig& scfg,
                                                     const PipelineConfig& cfg,
                                                     std::uint64_t seed) {
    scfg.validate();
    validate_biclustering(bc, data);
    const std::size_t n_views = data.size();
    std::vector<std::vector<double>> mean(n_views, std::vector<double>(bc.n_biclusters(), 0.0));

    std::size_t k_hat = 0;
    for (std::size_t v = 0; v < n_views; ++v) k_hat = std::max(k_hat, bc.count_nonempty(v));
    if (k_hat == 0) return mean;

    const std::vector<std::size_t> row_group = coupling_groups(w, RestrictionWeights::Kind::phi);
    const std::vector<std::size_t> col_group = coupling_groups(w, RestrictionWeights::Kind::psi);

    for (int m = 0; m < scfg.n_s; ++m) {
        std::mt19937_64 rng(derive_seed(seed, 1u, static_cast<std::uint64_t>(m)));
        std::vector<IndexSet> rows(n_views), cols(n_views);
        for (std::size_t v = 0; v < n_views; ++v) {
            const Matrix& x = data.view(v);
            rows[v] = row_group[v] == v ? subsample_indices(x.rows(), scfg.alpha, rng) : rows[row_group[v]];
            cols[v] = col_group[v] == v ? subsample_indices(x.cols(), scfg.alpha, rng) : cols[col_group[v]];
        }

        std::vector<Matrix> sub;
        MultiViewBiclustering restricted;
        for (std::size_t v = 0; v < n_views; ++v) {
            sub.push_back(submatrix(data.view(v), rows[v], cols[v]));
            ViewBiclustering rv;
            for (const Bicluster& b : bc.views[v]) rv.push_back(restrict_bicluster(b, rows[v], cols[v]));
            restricted.views.push_back(std::move(rv));
        }
        const MultiViewDataset sub_data(std::move(sub));

        PipelineConfig fit_cfg = cfg;
        fit_cfg.seed = derive_seed(seed, 2u, static_cast<std::uint64_t>(m));
        const int k = static_cast<int>(k_hat);
        const SolveResult fit = solve(sub_data, k, w, fit_cfg);
        const MultiViewBiclustering raw = extract(fit.factors);
        const MultiViewBiclustering refit =
            remove_spurious(sub_data, raw, fit.factors, k, w, fit_cfg,
                            derive_seed(seed, 3u, static_cast<std::uint64_t>(m)))
                .biclustering;

        for (std::size_t v = 0; v < n_views; ++v)
            for (std::size_t l = 0; l < bc.n_biclusters(); ++l)
                mean[v][l] += bicluster_relevance(l, restricted.views[v], refit.views[v]);
    }
    for (auto& row : mean)
        for (double& r : row) r /= static_cast<double>(scfg.n_s);
    return mean;
}

MultiViewBiclustering apply_stability_threshold(const MultiViewBiclustering& bc,
                                                const std::vector<std::vector<double>>& mean_relevance,
                                                double omega) {
    MultiViewBiclustering out = bc;
    for (std::size_t v = 0; v < out.n_views(); ++v)
        for (std::size_t l = 0; l < out.views[v].size(); ++l)
            if (mean_relevance.at(v).at(l) < omega) out.views[v][l] = Bicluster{};
    return out;
}

StabilityResult stability_filter(const MultiViewDataset& data, const MultiViewBiclustering& bc,
                                 const RestrictionWeights& w, const StabilityConfig& scfg,
                                 const PipelineConfig& cfg, std::uint64_t seed) {
    StabilityResult result;
    result.mean_relevance = stability_relevance(data, bc, w, scfg, cfg, seed);
    result.biclustering = apply_stability_threshold(bc, result.mean_relevance, scfg.omega);
    return result;
}

}  // namespace resnmtf
