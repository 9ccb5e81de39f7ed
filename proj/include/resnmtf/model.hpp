#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace resnmtf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

/// Sorted, duplicate-free list of 0-based indices.
using IndexSet = std::vector<Index>;

IndexSet make_index_set(std::vector<Index> indices);

/// Ordered collection of non-negative views. Rows and/or columns may be
/// shared between views; which ones is expressed through RestrictionWeights.
class MultiViewDataset {
public:
    MultiViewDataset() = default;
    explicit MultiViewDataset(std::vector<Matrix> views);

    std::size_t size() const noexcept { return views_.size(); }
    const Matrix& view(std::size_t v) const { return views_.at(v); }
    const std::vector<Matrix>& views() const noexcept { return views_; }

private:
    std::vector<Matrix> views_;
};

/// Numeric rank: singular values above 1e-10 times the largest one.
Index numeric_rank(const Matrix& m);

/// Throws NegativeEntry, EmptyView or RankDeficient (rank <= k_max).
void validate_dataset(const std::vector<Matrix>& views, int k_max);
void validate_dataset(const MultiViewDataset& data, int k_max);

/// Pairwise coupling strengths. Only entries (v, w) with v < w carry
/// weight; the weight of the unordered pair {u, v} is read from
/// the upper triangle regardless of argument order.
class RestrictionWeights {
public:
    enum class Kind { phi, xi, psi };

    RestrictionWeights() = default;
    explicit RestrictionWeights(std::size_t n_views);
    RestrictionWeights(Matrix phi, Matrix xi, Matrix psi);

    /// Every upper-triangular pair gets the same scalar.
    static RestrictionWeights broadcast(std::size_t n_views, double phi, double xi, double psi);

    std::size_t n_views() const noexcept { return static_cast<std::size_t>(phi_.rows()); }
    const Matrix& phi() const noexcept { return phi_; }
    const Matrix& xi() const noexcept { return xi_; }
    const Matrix& psi() const noexcept { return psi_; }
    const Matrix& matrix(Kind kind) const;

    double pair(Kind kind, std::size_t u, std::size_t v) const;
    void set_pair(Kind kind, std::size_t u, std::size_t v, double weight);

    /// True if any phi (rows) / psi (columns) weight links v and w.
    bool shares_rows(std::size_t v, std::size_t w) const { return pair(Kind::phi, v, w) > 0.0; }
    bool shares_cols(std::size_t v, std::size_t w) const { return pair(Kind::psi, v, w) > 0.0; }

private:
    void validate() const;
    Matrix& mutable_matrix(Kind kind);

    Matrix phi_, xi_, psi_;
};

/// Factors of one view: X ≈ F S Gᵀ with normalisation multipliers.
struct ViewFactors {
    Matrix F;           // n_r x K
    Matrix S;           // K x K
    Matrix G;           // n_c x K
    RowVector lambda;   // 1 x K
    RowVector mu;       // 1 x K

    Index rank() const noexcept { return S.rows(); }
};

using TriFactors = std::vector<ViewFactors>;

struct Bicluster {
    IndexSet rows;
    IndexSet cols;

    bool empty() const noexcept { return rows.empty() || cols.empty(); }
    friend bool operator==(const Bicluster&, const Bicluster&) = default;
};

using ViewBiclustering = std::vector<Bicluster>;

/// Per view, K aligned biclusters; index k refers to the same bicluster
/// in every view.
struct MultiViewBiclustering {
    std::vector<ViewBiclustering> views;

    std::size_t n_views() const noexcept { return views.size(); }
    std::size_t n_biclusters() const noexcept { return views.empty() ? 0 : views.front().size(); }
    /// Number of non-empty biclusters in view v.
    std::size_t count_nonempty(std::size_t v) const;

    friend bool operator==(const MultiViewBiclustering&, const MultiViewBiclustering&) = default;
};

/// Checks equal K across views and index bounds against the data shapes.
void validate_biclustering(const MultiViewBiclustering& bc, const MultiViewDataset& data);

enum class Distance { euclidean, cosine, manhattan };

std::string to_string(Distance d);
Distance parse_distance(const std::string& name);

struct PipelineConfig {
    int k_min = 3;
    int k_max = 8;
    int k_cap_extra = 7;        // upward extension cap is k_max + k_cap_extra
    double sigma_n = 0.05;      // init noise scale on S
    double tol = 1e-6;          // on successive mean relative errors
    int max_iters = 1000;
    int n_repeats = 10;         // shuffled refits for the spurious filter (n_R)
    int jsd_bins = 50;
    int n_stability = 5;        // subsample refits (n_s)
    double alpha = 0.9;         // subsample rate
    double omega = 0.4;         // stability threshold
    bool stability = true;
    Distance distance = Distance::euclidean;
    std::uint64_t seed = 0;

    void validate() const;
};

/// SplitMix64 finaliser; used to derive independent per-task seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

template <typename... Tags>
std::uint64_t derive_seed(std::uint64_t base, Tags... tags) noexcept {
    std::uint64_t s = mix_seed(base);
    ((s = mix_seed(s ^ (static_cast<std::uint64_t>(tags) + 0x9e3779b97f4a7c15ULL))), ...);
    return s;
}

}  // namespace resnmtf
