#include "resnmtf/factorisation.hpp"

#include "resnmtf/errors.hpp"

#include <cmath>
#include <random>

namespace resnmtf {

using Kind = RestrictionWeights::Kind;

ViewFactors svd_initialise(const Matrix& view, int k, const InitConfig& cfg) {
    if (k < 1) throw InvalidConfig("K must be >= 1");
    if (!(cfg.sigma_n > 0.0)) throw InvalidConfig("sigma_n must be > 0");
    if (k > std::min(view.rows(), view.cols()))
        throw RankDeficient("K = " + std::to_string(k) + " exceeds the view dimensions");

    Eigen::BDCSVD<Matrix> svd(view, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? 1e-10 * sv(0) : 0.0;
    const Index nonzero = (sv.array() > cutoff).count();
    if (sv.size() == 0 || sv(0) <= 0.0 || nonzero < k)
        throw RankDeficient("view has " + std::to_string(nonzero) +
                            " non-zero singular values, need " + std::to_string(k));

    const Matrix u = svd.matrixU().leftCols(k).cwiseAbs();
    const Matrix v = svd.matrixV().leftCols(k).cwiseAbs();
    const RowVector u_sums = u.colwise().sum();
    const RowVector v_sums = v.colwise().sum();

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> noise(0.0, cfg.sigma_n);
    Matrix core = sv.head(k).asDiagonal();
    for (Index j = 0; j < k; ++j)
        for (Index i = 0; i < k; ++i) core(i, j) += std::abs(noise(rng));

    ViewFactors f;
    f.F = u * u_sums.cwiseInverse().asDiagonal();
    f.G = v * v_sums.cwiseInverse().asDiagonal();
    f.S = u_sums.asDiagonal() * core * v_sums.asDiagonal();
    f.lambda = RowVector::Ones(k);
    f.mu = RowVector::Ones(k);
    return f;
}

namespace {

// Σ_u w_uv · factor(u) over views u ≠ v, plus Σ_u w_uv.
template <typename Get>
std::pair<Matrix, double> coupling(const TriFactors& factors, const RestrictionWeights& w,
                                   Kind kind, std::size_t v, const Matrix& like, Get get) {
    Matrix sum = Matrix::Zero(like.rows(), like.cols());
    double total = 0.0;
    for (std::size_t u = 0; u < factors.size(); ++u) {
        const double weight = w.pair(kind, u, v);
        if (u == v || weight == 0.0) continue;
        sum.noalias() += weight * get(factors[u]);
        total += weight;
    }
    return {std::move(sum), total};
}

void update_view(const Matrix& x, TriFactors& factors, const RestrictionWeights& w,
                 std::size_t v) {
    ViewFactors& f = factors[v];
    {
        auto [coupled, weight] =
            coupling(factors, w, Kind::phi, v, f.F, [](const ViewFactors& o) -> const Matrix& { return o.F; });
        const Matrix gtg = f.G.transpose() * f.G;
        Matrix numer = x * (f.G * f.S.transpose());
        numer += coupled;
        Matrix denom = f.F * (f.S * gtg * f.S.transpose());
        denom += weight * f.F;
        denom.rowwise() += 0.5 * f.lambda;
        denom.array() += kDenominatorFloor;
        f.F.array() *= numer.array() / denom.array();
    }
    {
        auto [coupled, weight] =
            coupling(factors, w, Kind::xi, v, f.S, [](const ViewFactors& o) -> const Matrix& { return o.S; });
        Matrix numer = f.F.transpose() * x * f.G;
        numer += coupled;
        Matrix denom = (f.F.transpose() * f.F) * f.S * (f.G.transpose() * f.G);
        denom += weight * f.S;
        denom.array() += kDenominatorFloor;
        f.S.array() *= numer.array() / denom.array();
    }
    {
        auto [coupled, weight] =
            coupling(factors, w, Kind::psi, v, f.G, [](const ViewFactors& o) -> const Matrix& { return o.G; });
        const Matrix fs = f.F * f.S;
        Matrix numer = x.transpose() * fs;
        numer += coupled;
        Matrix denom = f.G * (fs.transpose() * fs);
        denom += weight * f.G;
        denom.rowwise() += 0.5 * f.mu;
        denom.array() += kDenominatorFloor;
        f.G.array() *= numer.array() / denom.array();
    }
    f.lambda.array() *= f.F.colwise().sum().array();
    f.mu.array() *= f.G.colwise().sum().array();
}

bool all_finite(const ViewFactors& f) {
    return f.F.allFinite() && f.S.allFinite() && f.G.allFinite() && f.lambda.allFinite() &&
           f.mu.allFinite();
}

}  // namespace

void check_coupling_shapes(const MultiViewDataset& data, const RestrictionWeights& w) {
    if (w.n_views() != data.size())
        throw DimensionMismatch("restriction weights cover " + std::to_string(w.n_views()) +
                                " views, data has " + std::to_string(data.size()));
    for (std::size_t v = 0; v < data.size(); ++v)
        for (std::size_t u = v + 1; u < data.size(); ++u) {
            if (w.pair(Kind::phi, v, u) > 0.0 && data.view(v).rows() != data.view(u).rows())
                throw DimensionMismatch("phi couples views " + std::to_string(v + 1) + " and " +
                                        std::to_string(u + 1) + " with different row counts");
            if (w.pair(Kind::psi, v, u) > 0.0 && data.view(v).cols() != data.view(u).cols())
                throw DimensionMismatch("psi couples views " + std::to_string(v + 1) + " and " +
                                        std::to_string(u + 1) + " with different column counts");
        }
}

TriFactors update_step(const MultiViewDataset& data, const TriFactors& factors,
                       const RestrictionWeights& w) {
    if (factors.size() != data.size())
        throw DimensionMismatch("factor count does not match view count");
    TriFactors next = factors;
    for (std::size_t v = 0; v < data.size(); ++v) update_view(data.view(v), next, w, v);
    return next;
}

ConvergenceState relative_error(const MultiViewDataset& data, const TriFactors& factors) {
    if (factors.size() != data.size())
        throw DimensionMismatch("factor count does not match view count");
    ConvergenceState state;
    state.view_errors.reserve(data.size());
    double total = 0.0;
    for (std::size_t v = 0; v < data.size(); ++v) {
        const Matrix& x = data.view(v);
        const double norm2 = x.squaredNorm();
        if (norm2 == 0.0) throw ZeroNormView("view " + std::to_string(v + 1) + " is all zeros");
        const ViewFactors& f = factors[v];
        const double e = (x - f.F * f.S * f.G.transpose()).squaredNorm() / norm2;
        state.view_errors.push_back(e);
        total += e;
    }
    state.error = total / static_cast<double>(data.size());
    return state;
}

double objective(const MultiViewDataset& data, const TriFactors& factors,
                 const RestrictionWeights& w) {
    double value = 0.0;
    for (std::size_t v = 0; v < data.size(); ++v) {
        const ViewFactors& f = factors[v];
        value += (data.view(v) - f.F * f.S * f.G.transpose()).squaredNorm();
    }
    for (std::size_t v = 0; v < data.size(); ++v)
        for (std::size_t u = v + 1; u < data.size(); ++u) {
            if (const double p = w.pair(Kind::phi, v, u); p > 0.0)
                value += p * (factors[v].F - factors[u].F).squaredNorm();
            if (const double p = w.pair(Kind::xi, v, u); p > 0.0)
                value += p * (factors[v].S - factors[u].S).squaredNorm();
            if (const double p = w.pair(Kind::psi, v, u); p > 0.0)
                value += p * (factors[v].G - factors[u].G).squaredNorm();
        }
    return value;
}

void normalise_columns(ViewFactors& f) {
    for (Index k = 0; k < f.F.cols(); ++k) {
        const double s = f.F.col(k).sum();
        if (s > 0.0) {
            f.F.col(k) /= s;
            f.S.row(k) *= s;
        }
    }
    for (Index k = 0; k < f.G.cols(); ++k) {
        const double s = f.G.col(k).sum();
        if (s > 0.0) {
            f.G.col(k) /= s;
            f.S.col(k) *= s;
        }
    }
}

SolveResult solve(const MultiViewDataset& data, int k, const RestrictionWeights& w,
                  const PipelineConfig& cfg, std::span<const std::uint64_t> view_seeds) {
    if (view_seeds.size() != data.size())
        throw InvalidConfig("one initialisation seed per view is required");
    if (!(cfg.tol > 0.0)) throw InvalidConfig("tol must be > 0");
    if (cfg.max_iters < 0) throw InvalidConfig("max_iters must be >= 0");
    check_coupling_shapes(data, w);

    SolveResult result;
    result.factors.reserve(data.size());
    for (std::size_t v = 0; v < data.size(); ++v)
        result.factors.push_back(
            svd_initialise(data.view(v), k, InitConfig{cfg.sigma_n, view_seeds[v]}));
    if (cfg.max_iters == 0) return result;

    double previous = relative_error(data, result.factors).error;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        result.factors = update_step(data, result.factors, w);
        for (std::size_t v = 0; v < data.size(); ++v)
            if (!all_finite(result.factors[v]))
                throw NonFinite("view " + std::to_string(v + 1) + " factors at iteration " +
                                std::to_string(it));
        ConvergenceState state = relative_error(data, result.factors);
        state.iteration = it;
        state.previous_error = previous;
        const double current = state.error;
        result.trace.push_back(std::move(state));
        if (std::abs(current - previous) < cfg.tol) {
            result.converged = true;
            break;
        }
        previous = current;
    }
    for (ViewFactors& f : result.factors) normalise_columns(f);
    return result;
}

SolveResult solve(const MultiViewDataset& data, int k, const RestrictionWeights& w,
                  const PipelineConfig& cfg) {
    std::vector<std::uint64_t> seeds(data.size());
    for (std::size_t v = 0; v < data.size(); ++v)
        seeds[v] = derive_seed(cfg.seed, 0x1417ULL, static_cast<std::uint64_t>(k), v);
    return solve(data, k, w, cfg, seeds);
}

}  // namespace resnmtf
