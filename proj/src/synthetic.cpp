#include "resnmtf/synthetic.hpp"

#include "resnmtf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace resnmtf {

void SyntheticConfig::validate() const {
    if (k < 2) throw InvalidConfig("K must be >= 2");
    if (n_rows < 1 || n_cols.empty()) throw InvalidConfig("need at least one row and one view");
    for (Index c : n_cols)
        if (c < 1) throw InvalidConfig("every view needs at least one column");
    if (!(overlap >= 0.0 && overlap < 1.0)) throw InvalidConfig("overlap rate must lie in [0, 1)");
    if (!(nonexhaustive >= 0.0 && nonexhaustive < 1.0))
        throw InvalidConfig("non-exhaustivity rate must lie in [0, 1)");
    if (!(mu > 0.0 && sigma_b > 0.0 && sigma > 0.0))
        throw InvalidConfig("mu, sigma_b and sigma must be > 0");
}

std::vector<Index> split_sizes(Index total, int k) {
    if (k < 2) throw InfeasibleSplit("K must be >= 2");
    if (total < k)
        throw InfeasibleSplit("cannot split " + std::to_string(total) + " into " +
                              std::to_string(k) + " parts");
    std::vector<Index> parts = {4, 3};
    while (static_cast<int>(parts.size()) < k) {
        auto largest = std::max_element(parts.begin(), parts.end());
        if (*largest == 1) {
            for (Index& p : parts) p *= 2;
            continue;
        }
        const Index p = *largest;
        *largest = (p + 1) / 2;
        parts.insert(largest + 1, p / 2);
        std::stable_sort(parts.begin(), parts.end(), std::greater<>());
    }

    const Index part_sum = std::accumulate(parts.begin(), parts.end(), Index{0});
    std::vector<Index> sizes;
    sizes.reserve(parts.size());
    for (Index p : parts) sizes.push_back(total * p / part_sum);
    const Index remainder = total - std::accumulate(sizes.begin(), sizes.end(), Index{0});
    const auto first_smallest = std::find(parts.begin(), parts.end(), parts.back());
    sizes[static_cast<std::size_t>(first_smallest - parts.begin())] += remainder;

    if (std::any_of(sizes.begin(), sizes.end(), [](Index s) { return s < 1; }))
        throw InfeasibleSplit("a bicluster of size 0 would be produced for total " +
                              std::to_string(total));
    return sizes;
}

Index structured_extent(Index n, double nonexhaustive) {
    return static_cast<Index>(std::floor((1.0 - nonexhaustive) * static_cast<double>(n) + 1e-9));
}

namespace {

std::vector<Index> block_sizes(Index extent, int k, bool offset_sizing) {
    if (!offset_sizing) return split_sizes(extent, k);
    std::vector<Index> sizes = split_sizes(extent - k, k);
    for (Index& s : sizes) s += 1;
    return sizes;
}

// Contiguous blocks, then floor(r_o * size_k) members of block k copied into k + 1.
std::vector<IndexSet> block_memberships(const std::vector<Index>& sizes, double overlap,
                                        std::mt19937_64& rng) {
    std::vector<IndexSet> sets(sizes.size());
    Index start = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        sets[k].resize(static_cast<std::size_t>(sizes[k]));
        std::iota(sets[k].begin(), sets[k].end(), start);
        start += sizes[k];
    }
    if (overlap <= 0.0) return sets;
    const std::vector<IndexSet> base = sets;
    for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
        const auto n = static_cast<std::size_t>(
            std::floor(overlap * static_cast<double>(sizes[k]) + 1e-9));
        IndexSet picked;
        std::sample(base[k].begin(), base[k].end(), std::back_inserter(picked), n, rng);
        sets[k + 1].insert(sets[k + 1].end(), picked.begin(), picked.end());
        sets[k + 1] = make_index_set(std::move(sets[k + 1]));
    }
    return sets;
}

std::vector<Index> inverse(const std::vector<Index>& order) {
    std::vector<Index> inv(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) inv[static_cast<std::size_t>(order[p])] = static_cast<Index>(p);
    return inv;
}

IndexSet relabel(const IndexSet& s, const std::vector<Index>& inv) {
    IndexSet out;
    out.reserve(s.size());
    for (Index i : s) out.push_back(inv[static_cast<std::size_t>(i)]);
    return make_index_set(std::move(out));
}

}  // namespace

SyntheticData generate(const SyntheticConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> block(cfg.mu, cfg.sigma_b);
    std::normal_distribution<double> noise(0.0, cfg.sigma);

    const Index row_extent = structured_extent(cfg.n_rows, cfg.nonexhaustive);
    const std::vector<IndexSet> row_sets =
        block_memberships(block_sizes(row_extent, cfg.k, cfg.offset_sizing), cfg.overlap, rng);

    std::vector<Matrix> views;
    std::vector<std::vector<IndexSet>> col_sets;
    for (Index n_c : cfg.n_cols) {
        const Index col_extent = structured_extent(n_c, cfg.nonexhaustive);
        col_sets.push_back(
            block_memberships(block_sizes(col_extent, cfg.k, cfg.offset_sizing), cfg.overlap, rng));

        Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> signal_mask =
            Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(cfg.n_rows, n_c, false);
        for (int k = 0; k < cfg.k; ++k)
            for (Index j : col_sets.back()[static_cast<std::size_t>(k)])
                for (Index i : row_sets[static_cast<std::size_t>(k)]) signal_mask(i, j) = true;

        Matrix x(cfg.n_rows, n_c);
        for (Index j = 0; j < n_c; ++j)
            for (Index i = 0; i < cfg.n_rows; ++i) x(i, j) = signal_mask(i, j) ? block(rng) : 0.0;
        for (Index j = 0; j < n_c; ++j)
            for (Index i = 0; i < cfg.n_rows; ++i) x(i, j) = std::abs(x(i, j) + noise(rng));
        views.push_back(std::move(x));
    }

    SyntheticData out;
    out.row_order.resize(static_cast<std::size_t>(cfg.n_rows));
    std::iota(out.row_order.begin(), out.row_order.end(), Index{0});
    std::shuffle(out.row_order.begin(), out.row_order.end(), rng);
    const std::vector<Index> row_inv = inverse(out.row_order);

    std::vector<Matrix> shuffled;
    for (std::size_t v = 0; v < views.size(); ++v) {
        std::vector<Index> order(static_cast<std::size_t>(views[v].cols()));
        std::iota(order.begin(), order.end(), Index{0});
        std::shuffle(order.begin(), order.end(), rng);
        const std::vector<Index> col_inv = inverse(order);

        Matrix x(views[v].rows(), views[v].cols());
        for (Index q = 0; q < x.cols(); ++q)
            for (Index p = 0; p < x.rows(); ++p)
                x(p, q) = views[v](out.row_order[static_cast<std::size_t>(p)],
                                   order[static_cast<std::size_t>(q)]);
        shuffled.push_back(std::move(x));

        ViewBiclustering truth;
        for (int k = 0; k < cfg.k; ++k)
            truth.push_back(Bicluster{relabel(row_sets[static_cast<std::size_t>(k)], row_inv),
                                      relabel(col_sets[v][static_cast<std::size_t>(k)], col_inv)});
        out.truth.views.push_back(std::move(truth));
        out.col_order.push_back(std::move(order));
    }
    out.data = MultiViewDataset(std::move(shuffled));
    return out;
}

}  // namespace resnmtf
