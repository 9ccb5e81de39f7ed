#include "resnmtf/model.hpp"

#include "resnmtf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace resnmtf {

IndexSet make_index_set(std::vector<Index> indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return indices;
}

namespace {

void check_structure(const Matrix& x, std::size_t v) {
    if (x.rows() == 0 || x.cols() == 0)
        throw EmptyView("view " + std::to_string(v + 1) + " has no rows or no columns");
    for (Index j = 0; j < x.cols(); ++j)
        for (Index i = 0; i < x.rows(); ++i) {
            const double value = x(i, j);
            if (!(value >= 0.0))
                throw NegativeEntry("view " + std::to_string(v + 1) + " entry (" +
                                    std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                    ") = " + std::to_string(value));
        }
}

}  // namespace

MultiViewDataset::MultiViewDataset(std::vector<Matrix> views) : views_(std::move(views)) {
    if (views_.empty()) throw EmptyView("dataset has no views");
    for (std::size_t v = 0; v < views_.size(); ++v) check_structure(views_[v], v);
}

Index numeric_rank(const Matrix& m) {
    if (m.size() == 0) return 0;
    Eigen::BDCSVD<Matrix> svd(m);
    const Vector& s = svd.singularValues();
    if (s.size() == 0 || s(0) <= 0.0) return 0;
    const double cutoff = 1e-10 * s(0);
    return static_cast<Index>((s.array() > cutoff).count());
}

void validate_dataset(const std::vector<Matrix>& views, int k_max) {
    if (views.empty()) throw EmptyView("dataset has no views");
    for (std::size_t v = 0; v < views.size(); ++v) check_structure(views[v], v);
    for (std::size_t v = 0; v < views.size(); ++v) {
        const Index r = numeric_rank(views[v]);
        if (r <= k_max)
            throw RankDeficient("view " + std::to_string(v + 1) + " has numeric rank " +
                                std::to_string(r) + " <= " + std::to_string(k_max));
    }
}

void validate_dataset(const MultiViewDataset& data, int k_max) {
    validate_dataset(data.views(), k_max);
}

RestrictionWeights::RestrictionWeights(std::size_t n_views)
    : phi_(Matrix::Zero(n_views, n_views)),
      xi_(Matrix::Zero(n_views, n_views)),
      psi_(Matrix::Zero(n_views, n_views)) {}

RestrictionWeights::RestrictionWeights(Matrix phi, Matrix xi, Matrix psi)
    : phi_(std::move(phi)), xi_(std::move(xi)), psi_(std::move(psi)) {
    validate();
}

RestrictionWeights RestrictionWeights::broadcast(std::size_t n_views, double phi, double xi,
                                                 double psi) {
    RestrictionWeights w(n_views);
    for (std::size_t v = 0; v < n_views; ++v)
        for (std::size_t u = v + 1; u < n_views; ++u) {
            w.set_pair(Kind::phi, v, u, phi);
            w.set_pair(Kind::xi, v, u, xi);
            w.set_pair(Kind::psi, v, u, psi);
        }
    return w;
}

const Matrix& RestrictionWeights::matrix(Kind kind) const {
    switch (kind) {
        case Kind::phi: return phi_;
        case Kind::xi: return xi_;
        case Kind::psi: return psi_;
    }
    return phi_;
}

Matrix& RestrictionWeights::mutable_matrix(Kind kind) {
    return const_cast<Matrix&>(std::as_const(*this).matrix(kind));
}

double RestrictionWeights::pair(Kind kind, std::size_t u, std::size_t v) const {
    if (u == v) return 0.0;
    const auto lo = static_cast<Index>(std::min(u, v));
    const auto hi = static_cast<Index>(std::max(u, v));
    return matrix(kind)(lo, hi);
}

void RestrictionWeights::set_pair(Kind kind, std::size_t u, std::size_t v, double weight) {
    if (u == v) throw InvalidWeights("a view cannot be restricted to itself");
    if (u >= n_views() || v >= n_views()) throw InvalidWeights("view index out of range");
    if (!(weight >= 0.0) || !std::isfinite(weight))
        throw InvalidWeights("weights must be finite and non-negative");
    mutable_matrix(kind)(static_cast<Index>(std::min(u, v)), static_cast<Index>(std::max(u, v))) =
        weight;
}

void RestrictionWeights::validate() const {
    const Index n = phi_.rows();
    for (const Matrix* m : {&phi_, &xi_, &psi_}) {
        if (m->rows() != n || m->cols() != n)
            throw InvalidWeights("phi, xi and psi must all be n_views x n_views");
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) {
                const double x = (*m)(i, j);
                if (!(x >= 0.0) || !std::isfinite(x))
                    throw InvalidWeights("weights must be finite and non-negative");
                if (j <= i && x != 0.0)
                    throw InvalidWeights("weight at (" + std::to_string(i + 1) + "," +
                                         std::to_string(j + 1) +
                                         ") is outside the strict upper triangle");
            }
    }
}

std::size_t MultiViewBiclustering::count_nonempty(std::size_t v) const {
    const auto& view = views.at(v);
    return static_cast<std::size_t>(
        std::count_if(view.begin(), view.end(), [](const Bicluster& b) { return !b.empty(); }));
}

void validate_biclustering(const MultiViewBiclustering& bc, const MultiViewDataset& data) {
    if (bc.n_views() != data.size())
        throw DimensionMismatch("biclustering has " + std::to_string(bc.n_views()) +
                                " views, data has " + std::to_string(data.size()));
    const std::size_t k = bc.n_biclusters();
    for (std::size_t v = 0; v < bc.n_views(); ++v) {
        if (bc.views[v].size() != k)
            throw DimensionMismatch("bicluster count differs between views");
        const Matrix& x = data.view(v);
        for (const Bicluster& b : bc.views[v]) {
            for (Index i : b.rows)
                if (i < 0 || i >= x.rows()) throw DimensionMismatch("row index out of range");
            for (Index j : b.cols)
                if (j < 0 || j >= x.cols()) throw DimensionMismatch("column index out of range");
        }
    }
}

std::string to_string(Distance d) {
    switch (d) {
        case Distance::euclidean: return "euclidean";
        case Distance::cosine: return "cosine";
        case Distance::manhattan: return "manhattan";
    }
    return "euclidean";
}

Distance parse_distance(const std::string& name) {
    if (name == "euclidean") return Distance::euclidean;
    if (name == "cosine") return Distance::cosine;
    if (name == "manhattan") return Distance::manhattan;
    throw InvalidConfig("unknown distance '" + name + "'");
}

void PipelineConfig::validate() const {
    if (k_min < 3) throw InvalidConfig("k_min must be >= 3");
    if (k_max < k_min) throw InvalidConfig("k_max must be >= k_min");
    if (k_cap_extra < 0) throw InvalidConfig("k_cap_extra must be >= 0");
    if (!(sigma_n > 0.0)) throw InvalidConfig("sigma_n must be > 0");
    if (!(tol > 0.0)) throw InvalidConfig("tol must be > 0");
    if (max_iters < 0) throw InvalidConfig("max_iters must be >= 0");
    if (n_repeats < 1 || n_stability < 1 || jsd_bins < 1)
        throw InvalidConfig("repetition and bin counts must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidConfig("alpha must lie in (0, 1]");
    if (!(omega >= 0.0 && omega <= 1.0)) throw InvalidConfig("omega must lie in [0, 1]");
}

std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace resnmtf
