#include "resnmtf/spurious.hpp"

#include "resnmtf/errors.hpp"
#include "resnmtf/extraction.hpp"
#include "resnmtf/factorisation.hpp"

#include <algorithm>
#include <cmath>

namespace resnmtf {

Matrix shuffle_view(const Matrix& x, std::mt19937_64& rng) {
    Matrix out = x;
    std::shuffle(out.data(), out.data() + out.size(), rng);
    return out;
}

double jsd(std::span<const double> a, std::span<const double> b, int bins) {
    if (a.empty() || b.empty()) throw EmptySample("JSD needs two non-empty samples");
    if (bins < 1) throw InvalidConfig("bins must be >= 1");

    const auto [a_lo, a_hi] = std::minmax_element(a.begin(), a.end());
    const auto [b_lo, b_hi] = std::minmax_element(b.begin(), b.end());
    const double lo = std::min(*a_lo, *b_lo);
    const double hi = std::max(*a_hi, *b_hi);
    if (!(hi > lo)) return 0.0;

    const auto histogram = [&](std::span<const double> sample) {
        std::vector<double> h(static_cast<std::size_t>(bins), 0.0);
        for (double x : sample) {
            auto idx = static_cast<long>(std::floor((x - lo) / (hi - lo) * bins));
            idx = std::clamp(idx, 0L, static_cast<long>(bins - 1));
            h[static_cast<std::size_t>(idx)] += 1.0;
        }
        for (double& c : h) c /= static_cast<double>(sample.size());
        return h;
    };
    const std::vector<double> p = histogram(a);
    const std::vector<double> q = histogram(b);

    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = 0.5 * (p[i] + q[i]);
        const double tp = p[i] > 0.0 ? p[i] * std::log2(p[i] / m) : 0.0;
        const double tq = q[i] > 0.0 ? q[i] * std::log2(q[i] / m) : 0.0;
        total += 0.5 * (tp + tq);
    }
    return std::clamp(total, 0.0, 1.0);
}

namespace {

std::span<const double> column(const Matrix& m, Index k) {
    return {m.data() + k * m.rows(), static_cast<std::size_t>(m.rows())};
}

}  // namespace

NoiseFitEnsemble build_noise_ensemble(const MultiViewDataset& data, int k,
                                      const RestrictionWeights& w, const PipelineConfig& cfg,
                                      std::uint64_t seed) {
    NoiseFitEnsemble ensemble;
    ensemble.f_hat.reserve(static_cast<std::size_t>(cfg.n_repeats));
    for (int m = 0; m < cfg.n_repeats; ++m) {
        std::mt19937_64 rng(derive_seed(seed, 0x5u, static_cast<std::uint64_t>(m)));
        std::vector<Matrix> shuffled;
        shuffled.reserve(data.size());
        for (const Matrix& x : data.views()) shuffled.push_back(shuffle_view(x, rng));
        PipelineConfig fit_cfg = cfg;
        fit_cfg.seed = derive_seed(seed, 0x6u, static_cast<std::uint64_t>(m));
        SolveResult fit = solve(MultiViewDataset(std::move(shuffled)), k, w, fit_cfg);
        std::vector<Matrix> fs;
        fs.reserve(fit.factors.size());
        for (ViewFactors& f : fit.factors) fs.push_back(std::move(f.F));
        ensemble.f_hat.push_back(std::move(fs));
    }
    return ensemble;
}

double null_threshold(const NoiseFitEnsemble& ensemble, std::size_t v, int bins) {
    if (ensemble.repeats() < 2)
        throw InsufficientRepetitions("the null threshold needs at least two shuffled fits");
    double best = 0.0;
    for (std::size_t n = 0; n + 1 < ensemble.repeats(); ++n)
        for (std::size_t m = n + 1; m < ensemble.repeats(); ++m) {
            const Matrix& fn = ensemble.f_hat[n].at(v);
            const Matrix& fm = ensemble.f_hat[m].at(v);
            for (Index i = 0; i < fn.cols(); ++i)
                for (Index j = 0; j < fm.cols(); ++j)
                    best = std::max(best, jsd(column(fn, i), column(fm, j), bins));
        }
    return best;
}

double bicluster_test_score(std::span<const double> col, const NoiseFitEnsemble& ensemble,
                            std::size_t v, int bins) {
    double total = 0.0;
    std::size_t count = 0;
    for (const auto& rep : ensemble.f_hat) {
        const Matrix& f = rep.at(v);
        for (Index j = 0; j < f.cols(); ++j) {
            total += jsd(col, column(f, j), bins);
            ++count;
        }
    }
    return count == 0 ? 0.0 : total / static_cast<double>(count);
}

SpuriousResult remove_spurious(const MultiViewDataset& data, const MultiViewBiclustering& bc,
                               const TriFactors& factors, const NoiseFitEnsemble& ensemble,
                               int bins) {
    if (factors.size() != data.size() || bc.n_views() != data.size())
        throw DimensionMismatch("factors, biclustering and data disagree on view count");
    SpuriousResult result{bc, {}};
    for (std::size_t v = 0; v < data.size(); ++v) {
        const ViewFactors& f = factors[v];
        if (bc.views[v].size() != static_cast<std::size_t>(f.F.cols()))
            throw DimensionMismatch("bicluster count does not match factor rank");
        const double threshold = null_threshold(ensemble, v, bins);
        const std::vector<Index> match = match_row_clusters(f.S);
        std::vector<double> scores;
        for (std::size_t l = 0; l < bc.views[v].size(); ++l) {
            const double t = bicluster_test_score(column(f.F, match[l]), ensemble, v, bins);
            scores.push_back(t);
            if (t < threshold) result.biclustering.views[v][l] = Bicluster{};
        }
        result.report.threshold.push_back(threshold);
        result.report.test_scores.push_back(std::move(scores));
    }
    return result;
}

SpuriousResult remove_spurious(const MultiViewDataset& data, const MultiViewBiclustering& bc,
                               const TriFactors& factors, int k, const RestrictionWeights& w,
                               const PipelineConfig& cfg, std::uint64_t seed) {
    const NoiseFitEnsemble ensemble = build_noise_ensemble(data, k, w, cfg, seed);
    return remove_spurious(data, bc, factors, ensemble, cfg.jsd_bins);
}

}  // namespace resnmtf
