#include "resnmtf/pipeline.hpp"

#include "resnmtf/errors.hpp"
#include "resnmtf/extraction.hpp"
#include "resnmtf/factorisation.hpp"
#include "resnmtf/stability.hpp"

#include <algorithm>
#include <limits>

namespace resnmtf {

namespace {

enum SeedTag : std::uint64_t { fit_tag = 0x10, spurious_tag, score_tag, final_score_tag, stability_tag, sweep_tag };

std::vector<std::size_t> nonempty_counts(const MultiViewBiclustering& bc) {
    std::vector<std::size_t> counts;
    for (std::size_t v = 0; v < bc.n_views(); ++v) counts.push_back(bc.count_nonempty(v));
    return counts;
}

StabilityConfig stability_config(const PipelineConfig& cfg) {
    return StabilityConfig{cfg.omega, cfg.n_stability, cfg.alpha};
}

}  // namespace

CandidateResult fit_fixed_k(const MultiViewDataset& data, int k, const RestrictionWeights& w,
                            const PipelineConfig& cfg) {
    PipelineConfig fit_cfg = cfg;
    fit_cfg.seed = derive_seed(cfg.seed, fit_tag, k);
    const SolveResult fit = solve(data, k, w, fit_cfg);

    CandidateResult c;
    c.k = k;
    c.iterations = fit.iterations();
    c.converged = fit.converged;
    c.raw = extract(fit.factors);
    SpuriousResult sp = remove_spurious(data, c.raw, fit.factors, k, w, cfg,
                                        derive_seed(cfg.seed, spurious_tag, k));
    c.filtered = std::move(sp.biclustering);
    c.spurious = std::move(sp.report);
    c.counts = nonempty_counts(c.filtered);
    c.bisilhouette =
        bisilhouette(data, c.filtered, cfg.distance, derive_seed(cfg.seed, score_tag, k)).overall;
    return c;
}

const CandidateResult& SelectionTrace::selected() const {
    for (const CandidateResult& c : candidates)
        if (c.k == k_hat) return c;
    throw InvalidConfig("selection trace has no candidate for K = " + std::to_string(k_hat));
}

SelectionTrace select_k(const MultiViewDataset& data, const RestrictionWeights& w,
                        const PipelineConfig& cfg) {
    cfg.validate();
    validate_dataset(data, cfg.k_max);
    check_coupling_shapes(data, w);

    Index min_rank = std::numeric_limits<Index>::max();
    for (const Matrix& x : data.views()) min_rank = std::min(min_rank, numeric_rank(x));
    const int cap = static_cast<int>(std::min<Index>(cfg.k_max + cfg.k_cap_extra, min_rank - 1));

    SelectionTrace trace;
    std::size_t best = 0;
    const auto consider = [&](int k) {
        trace.candidates.push_back(fit_fixed_k(data, k, w, cfg));
        if (trace.candidates.back().bisilhouette > trace.candidates[best].bisilhouette)
            best = trace.candidates.size() - 1;
    };

    for (int k = cfg.k_min; k <= cfg.k_max; ++k) consider(k);
    int top = cfg.k_max;
    while (trace.candidates[best].k == top) {
        if (top >= cap) {
            trace.range_cap_reached = true;
            break;
        }
        consider(++top);
    }
    trace.k_hat = trace.candidates[best].k;
    return trace;
}

PipelineResult run(const MultiViewDataset& data, const RestrictionWeights& w,
                   const PipelineConfig& cfg) {
    PipelineResult result;
    result.trace = select_k(data, w, cfg);
    result.biclustering = result.trace.selected().filtered;
    if (cfg.stability) {
        StabilityResult st = stability_filter(data, result.biclustering, w, stability_config(cfg),
                                              cfg, derive_seed(cfg.seed, stability_tag));
        result.biclustering = std::move(st.biclustering);
        result.scores.stability_relevance = std::move(st.mean_relevance);
    }
    result.scores.bisilhouette =
        bisilhouette(data, result.biclustering, cfg.distance, derive_seed(cfg.seed, final_score_tag));
    return result;
}

bool restrictions_indicator(const MultiViewBiclustering& bc) {
    for (std::size_t u = 0; u < bc.n_views(); ++u)
        for (std::size_t v = u + 1; v < bc.n_views(); ++v)
            for (std::size_t k = 0; k < bc.n_biclusters(); ++k)
                if (bc.views[u][k].rows.size() != bc.views[v][k].rows.size()) return false;
    return true;
}

SweepTable sweep_restriction(const MultiViewDataset& data, RestrictionWeights::Kind kind,
                             const std::vector<double>& values, const RestrictionWeights& base,
                             const PipelineConfig& cfg) {
    if (values.empty()) throw InvalidConfig("sweep needs at least one value");
    SweepTable table;
    table.kind = kind;
    for (std::size_t i = 0; i < values.size(); ++i) {
        RestrictionWeights w = base;
        for (std::size_t u = 0; u < data.size(); ++u)
            for (std::size_t v = u + 1; v < data.size(); ++v) w.set_pair(kind, u, v, values[i]);
        PipelineConfig run_cfg = cfg;
        run_cfg.seed = derive_seed(cfg.seed, sweep_tag, i);
        PipelineResult r = run(data, w, run_cfg);

        SweepRow row;
        row.value = values[i];
        row.bisilhouette = r.scores.bisilhouette.overall;
        row.k_hat = r.trace.k_hat;
        row.counts = nonempty_counts(r.biclustering);
        row.restrictions = restrictions_indicator(r.biclustering);
        row.biclustering = std::move(r.biclustering);
        table.rows.push_back(std::move(row));
        if (table.rows.back().bisilhouette > table.rows[table.best].bisilhouette)
            table.best = table.rows.size() - 1;
    }
    return table;
}

std::vector<OmegaSweepRow> sweep_omega(const MultiViewDataset& data, const RestrictionWeights& w,
                                       const std::vector<double>& omegas, const PipelineConfig& cfg) {
    if (omegas.empty()) throw InvalidConfig("sweep needs at least one omega");
    const SelectionTrace trace = select_k(data, w, cfg);
    const MultiViewBiclustering& selected = trace.selected().filtered;
    StabilityConfig scfg = stability_config(cfg);
    for (double omega : omegas) {
        scfg.omega = omega;
        scfg.validate();
    }
    const auto relevance =
        stability_relevance(data, selected, w, scfg, cfg, derive_seed(cfg.seed, stability_tag));

    std::vector<OmegaSweepRow> rows;
    for (double omega : omegas) {
        OmegaSweepRow row;
        row.omega = omega;
        row.biclustering = apply_stability_threshold(selected, relevance, omega);
        row.counts = nonempty_counts(row.biclustering);
        row.bisilhouette = bisilhouette(data, row.biclustering, cfg.distance,
                                        derive_seed(cfg.seed, final_score_tag))
                               .overall;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace resnmtf
