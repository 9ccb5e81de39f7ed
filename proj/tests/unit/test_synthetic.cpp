#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "resnmtf/errors.hpp"
#include "resnmtf/synthetic.hpp"

#include <algorithm>
#include <numeric>

using namespace resnmtf;

TEST_CASE("split_sizes examples") {
    CHECK(split_sizes(195, 5) == std::vector<Index>{55, 55, 31, 27, 27});
    CHECK(split_sizes(95, 5) == std::vector<Index>{27, 27, 15, 13, 13});
    CHECK(split_sizes(7, 2) == std::vector<Index>{4, 3});
    CHECK(split_sizes(200, 2) == std::vector<Index>{114, 86});
}

TEST_CASE("split_sizes sums and ordering") {
    for (int k = 2; k <= 12; ++k)
        for (Index total : {Index{40}, Index{97}, Index{200}, Index{250}}) {
            const auto s = split_sizes(total, k);
            REQUIRE(s.size() == static_cast<std::size_t>(k));
            CHECK(std::accumulate(s.begin(), s.end(), Index{0}) == total);
            CHECK(*std::min_element(s.begin(), s.end()) >= 1);
        }
}

TEST_CASE("infeasible splits") {
    CHECK_THROWS_AS(split_sizes(1, 2), InfeasibleSplit);
    CHECK_THROWS_AS(split_sizes(3, 4), InfeasibleSplit);
    CHECK_THROWS_AS(split_sizes(10, 1), InfeasibleSplit);
    SyntheticConfig cfg;
    cfg.n_rows = 3;
    cfg.n_cols = {20};
    cfg.k = 4;
    CHECK_THROWS_AS(generate(cfg), InfeasibleSplit);
}

TEST_CASE("config validation") {
    SyntheticConfig cfg;
    cfg.overlap = 1.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
    cfg = SyntheticConfig{};
    cfg.sigma = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
    cfg = SyntheticConfig{};
    cfg.k = 1;
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
}

TEST_CASE("non-exhaustive extent") {
    CHECK(structured_extent(200, 0.0) == 200);
    CHECK(structured_extent(200, 0.1) == 180);
    CHECK(structured_extent(3, 0.5) == 1);
}

namespace {

SyntheticConfig small(std::uint64_t seed) {
    SyntheticConfig cfg;
    cfg.n_rows = 60;
    cfg.n_cols = {30, 45};
    cfg.k = 3;
    cfg.sigma = 1.0;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("exhaustive exclusive truth partitions rows and columns") {
    const SyntheticData s = generate(small(4));
    REQUIRE(s.truth.n_views() == 2);
    for (std::size_t v = 0; v < 2; ++v) {
        std::vector<int> row_hits(60, 0), col_hits(static_cast<std::size_t>(s.data.view(v).cols()), 0);
        for (const Bicluster& b : s.truth.views[v]) {
            for (Index i : b.rows) ++row_hits[static_cast<std::size_t>(i)];
            for (Index j : b.cols) ++col_hits[static_cast<std::size_t>(j)];
        }
        CHECK(std::all_of(row_hits.begin(), row_hits.end(), [](int h) { return h == 1; }));
        CHECK(std::all_of(col_hits.begin(), col_hits.end(), [](int h) { return h == 1; }));
        CHECK(s.data.view(v).minCoeff() >= 0.0);
    }
    // Shared rows: every view's bicluster k has the same row set.
    for (std::size_t k = 0; k < 3; ++k) CHECK(s.truth.views[0][k].rows == s.truth.views[1][k].rows);
}

TEST_CASE("unshuffling the truth reproduces contiguous blocks") {
    const SyntheticData s = generate(small(8));
    const auto sizes = split_sizes(60, 3);
    Index start = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        IndexSet original;
        for (Index p : s.truth.views[0][k].rows) original.push_back(s.row_order[static_cast<std::size_t>(p)]);
        std::sort(original.begin(), original.end());
        IndexSet expected(static_cast<std::size_t>(sizes[k]));
        std::iota(expected.begin(), expected.end(), start);
        CHECK(original == expected);
        start += sizes[k];
    }
    CHECK(s.col_order[0] != s.col_order[1]);
}

TEST_CASE("same seed, same data") {
    const SyntheticData a = generate(small(11));
    const SyntheticData b = generate(small(11));
    const SyntheticData c = generate(small(12));
    CHECK(a.data.view(0) == b.data.view(0));
    CHECK(a.data.view(1) == b.data.view(1));
    CHECK(a.truth == b.truth);
    CHECK(a.data.view(0) != c.data.view(0));
}

TEST_CASE("overlap adds floor(r_o * size) members to the next bicluster only") {
    SyntheticConfig cfg = small(3);
    cfg.overlap = 0.2;
    const SyntheticData s = generate(cfg);
    const auto row_sizes = split_sizes(60, 3);
    const ViewBiclustering& t = s.truth.views[0];
    CHECK(t[0].rows.size() == static_cast<std::size_t>(row_sizes[0]));
    CHECK(t[1].rows.size() == static_cast<std::size_t>(row_sizes[1] + row_sizes[0] / 5));
    CHECK(t[2].rows.size() == static_cast<std::size_t>(row_sizes[2] + row_sizes[1] / 5));
    IndexSet shared;
    std::set_intersection(t[0].rows.begin(), t[0].rows.end(), t[2].rows.begin(), t[2].rows.end(),
                          std::back_inserter(shared));
    CHECK(shared.empty());
}

TEST_CASE("non-exhaustive rows belong to no bicluster") {
    SyntheticConfig cfg = small(5);
    cfg.nonexhaustive = 0.1;
    const SyntheticData s = generate(cfg);
    for (std::size_t v = 0; v < 2; ++v) {
        std::size_t rows = 0, cols = 0;
        for (const Bicluster& b : s.truth.views[v]) {
            rows += b.rows.size();
            cols += b.cols.size();
        }
        CHECK(rows == 54);
        CHECK(cols == static_cast<std::size_t>(structured_extent(cfg.n_cols[v], 0.1)));
    }
}

TEST_CASE("offset sizing adds one per bicluster to an n - K split") {
    SyntheticConfig cfg;
    cfg.n_rows = 200;
    cfg.n_cols = {100};
    cfg.k = 5;
    cfg.offset_sizing = true;
    const SyntheticData s = generate(cfg);
    std::vector<std::size_t> sizes;
    for (const Bicluster& b : s.truth.views[0]) sizes.push_back(b.rows.size());
    CHECK(sizes == std::vector<std::size_t>{56, 56, 32, 28, 28});
}

TEST_CASE("low-noise block means approach mu") {
    SyntheticConfig cfg = small(21);
    cfg.sigma = 1e-3;
    const SyntheticData s = generate(cfg);
    for (const Bicluster& b : s.truth.views[0]) {
        double total = 0.0;
        for (Index i : b.rows)
            for (Index j : b.cols) total += s.data.view(0)(i, j);
        const double n = static_cast<double>(b.rows.size() * b.cols.size());
        CHECK(std::abs(total / n - cfg.mu) < 3.0 * cfg.sigma_b / std::sqrt(n) + 1e-3);
    }
}
