// Acceptance checks. Usage: acceptance [criterion ...]  (default: all)
// Prints one PASS/FAIL line per criterion; exit status 1 if any failed.

#include "resnmtf/bisilhouette.hpp"
#include "resnmtf/extraction.hpp"
#include "resnmtf/factorisation.hpp"
#include "resnmtf/io.hpp"
#include "resnmtf/metrics.hpp"
#include "resnmtf/pipeline.hpp"
#include "resnmtf/spurious.hpp"
#include "resnmtf/stability.hpp"
#include "resnmtf/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace resnmtf;
namespace fs = std::filesystem;

namespace {

// Tolerances and thresholds.
constexpr double kMetricTol = 1e-12;
constexpr double kObjectiveSlack = 1e-8;
constexpr double kColumnSumTol = 0.05;
constexpr double kBlockScoreTol = 1e-9;
constexpr double kJsdTol = 1e-12;
constexpr double kRecoveryFloor = 0.75;   // criterion 6, mean F-score
constexpr int kSelectionHits = 8;         // criterion 7, of 10
constexpr double kCsrFloor = 0.9;
constexpr int kNullHits = 9;              // criterion 8, of 10
constexpr int kPlantedHits = 9;
constexpr int kCouplingHits = 9;          // criterion 5, of 10
constexpr int kOrderingHits = 95;         // criterion 10, of 100
constexpr int kAgreementHits = 9;         // criterion 11, of 10
constexpr double kPhi = 200.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x, int digits = 4) {
    std::ostringstream s;
    s.precision(digits);
    s << x;
    return s.str();
}

SyntheticConfig base_scenario(double sigma, std::uint64_t seed) {
    SyntheticConfig sc;
    sc.n_rows = 200;
    sc.n_cols = {100, 250};
    sc.k = 4;
    sc.sigma = sigma;
    sc.seed = seed;
    return sc;
}

RestrictionWeights rows_coupled(std::size_t n_views, double phi) {
    return RestrictionWeights::broadcast(n_views, phi, 0.0, 0.0);
}

IndexSet random_set(std::mt19937_64& rng, Index universe, int max_size) {
    std::uniform_int_distribution<int> size(0, max_size);
    std::vector<Index> all(static_cast<std::size_t>(universe));
    std::iota(all.begin(), all.end(), Index{0});
    IndexSet out;
    std::sample(all.begin(), all.end(), std::back_inserter(out), static_cast<std::size_t>(size(rng)), rng);
    return out;
}

ViewBiclustering random_view_biclustering(std::mt19937_64& rng, Index n_rows, Index n_cols, int k,
                                          int max_size) {
    ViewBiclustering out;
    for (int i = 0; i < k; ++i) {
        Bicluster b{random_set(rng, n_rows, max_size), random_set(rng, n_cols, max_size)};
        if (b.empty()) b = Bicluster{};
        out.push_back(std::move(b));
    }
    return out;
}

// ---------------------------------------------------------------------------

Outcome c1() {
    const auto a = split_sizes(195, 5);
    const auto b = split_sizes(95, 5);
    const bool ok = a == std::vector<Index>{55, 55, 31, 27, 27} && b == std::vector<Index>{27, 27, 15, 13, 13};
    std::ostringstream d;
    d << "split(195,5)=";
    for (Index s : a) d << s << ' ';
    d << "split(95,5)=";
    for (Index s : b) d << s << ' ';
    return {ok, d.str()};
}

// Brute-force counterparts built on explicit cell sets.
using Cells = std::set<std::pair<Index, Index>>;

Cells cells(const Bicluster& b) {
    Cells out;
    for (Index i : b.rows)
        for (Index j : b.cols) out.emplace(i, j);
    return out;
}

double brute_jaccard(const Bicluster& a, const Bicluster& b) {
    const Cells ca = cells(a), cb = cells(b);
    Cells inter, uni;
    std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(), std::inserter(inter, inter.end()));
    std::set_union(ca.begin(), ca.end(), cb.begin(), cb.end(), std::inserter(uni, uni.end()));
    return uni.empty() ? 0.0 : static_cast<double>(inter.size()) / static_cast<double>(uni.size());
}

double brute_best_mean(const ViewBiclustering& from, const ViewBiclustering& to) {
    double total = 0.0;
    int n = 0;
    for (const Bicluster& b : from) {
        if (cells(b).empty()) continue;
        double best = 0.0;
        for (const Bicluster& t : to)
            if (!cells(t).empty()) best = std::max(best, brute_jaccard(b, t));
        total += best;
        ++n;
    }
    return n == 0 ? 0.0 : total / n;
}

Outcome c2() {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> kdist(1, 5);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const ViewBiclustering found = random_view_biclustering(rng, 9, 9, kdist(rng), 6);
        const ViewBiclustering truth = random_view_biclustering(rng, 9, 9, kdist(rng), 6);
        for (const Bicluster& a : found)
            for (const Bicluster& b : truth)
                worst = std::max(worst, std::abs(jaccard(a, b) - brute_jaccard(a, b)));
        const double rel = brute_best_mean(found, truth);
        const double rec = brute_best_mean(truth, found);
        const double f = rel + rec > 0.0 ? 2.0 * rel * rec / (rel + rec) : 0.0;
        worst = std::max(worst, std::abs(relevance(found, truth) - rel));
        worst = std::max(worst, std::abs(recovery(found, truth) - rec));
        worst = std::max(worst, std::abs(f_score(found, truth) - f));
    }
    double csr_worst = 0.0;
    for (int kh = 0; kh <= 10; ++kh)
        for (int k = 0; k <= 10; ++k) {
            const double closed = 1.0 - std::abs(kh - k) / static_cast<double>(kh + k + 1);
            csr_worst = std::max(csr_worst, std::abs(csr(kh, k) - closed));
        }
    return {worst <= kMetricTol && csr_worst <= kMetricTol,
            "max metric deviation " + fmt(worst) + ", max CSR deviation " + fmt(csr_worst)};
}

Outcome c3() {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<Index> rows(10, 30), cols(8, 20);
    const int ks[] = {3, 4, 5};
    const double phis[] = {0.0, kPhi};
    double worst = 0.0;
    int sweeps = 0;
    for (int inst = 0; inst < 50; ++inst) {
        const int k = ks[inst % 3];
        const double phi = phis[(inst / 3) % 2];
        const Index r = rows(rng);
        std::vector<Matrix> views;
        for (int v = 0; v < 2; ++v) {
            Matrix x(r, std::max<Index>(cols(rng), k + 1));
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
            views.push_back(std::move(x));
        }
        const MultiViewDataset data(std::move(views));
        const RestrictionWeights w = rows_coupled(2, phi);
        TriFactors f;
        for (std::size_t v = 0; v < 2; ++v)
            f.push_back(svd_initialise(data.view(v), k, InitConfig{0.05, derive_seed(3, inst, v)}));
        double prev = objective(data, f, w);
        for (int it = 0; it < 200; ++it) {
            f = update_step(data, f, w);
            const double cur = objective(data, f, w);
            worst = std::max(worst, (cur - prev) / std::max(prev, 1e-300));
            prev = cur;
            ++sweeps;
        }
    }
    return {worst <= kObjectiveSlack,
            "largest relative increase " + fmt(worst) + " over " + std::to_string(sweeps) + " sweeps"};
}

double column_sum_deviation(const Matrix& m) {
    return (m.colwise().sum().array() - 1.0).abs().maxCoeff();
}

Outcome c4() {
    const SyntheticData s = generate(base_scenario(1.0, 4));
    const RestrictionWeights w = rows_coupled(2, kPhi);
    PipelineConfig cfg;
    cfg.seed = 4;

    // Iterate by hand so every intermediate iterate can be inspected.
    TriFactors f;
    for (std::size_t v = 0; v < s.data.size(); ++v)
        f.push_back(svd_initialise(s.data.view(v), 4, InitConfig{cfg.sigma_n, derive_seed(cfg.seed, v)}));
    bool nonneg = true;
    double prev = relative_error(s.data, f).error;
    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        f = update_step(s.data, f, w);
        for (const ViewFactors& vf : f)
            nonneg = nonneg && vf.F.minCoeff() >= 0.0 && vf.S.minCoeff() >= 0.0 && vf.G.minCoeff() >= 0.0;
        const double cur = relative_error(s.data, f).error;
        if (std::abs(cur - prev) < cfg.tol) break;
        prev = cur;
    }
    double raw_dev = 0.0;
    for (const ViewFactors& vf : f)
        raw_dev = std::max({raw_dev, column_sum_deviation(vf.F), column_sum_deviation(vf.G)});

    const SolveResult fit = solve(s.data, 4, w, cfg);
    double dev = 0.0;
    for (const ViewFactors& vf : fit.factors) {
        nonneg = nonneg && vf.F.minCoeff() >= 0.0 && vf.G.minCoeff() >= 0.0 && vf.S.minCoeff() >= 0.0;
        dev = std::max({dev, column_sum_deviation(vf.F), column_sum_deviation(vf.G)});
    }
    return {nonneg && dev <= kColumnSumTol,
            std::string("non-negative ") + (nonneg ? "yes" : "no") + ", column-sum deviation " + fmt(dev) +
                " (before final rescale " + fmt(raw_dev) + ", " + std::to_string(it) + " sweeps)"};
}

Outcome c5() {
    int hits = 0;
    std::ostringstream d;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SyntheticData s = generate(base_scenario(1.0, 50 + seed));
        const MultiViewDataset twin({s.data.view(0), s.data.view(0)});
        PipelineConfig cfg;
        cfg.seed = seed;
        const auto gap = [&](double phi) {
            const SolveResult fit = solve(twin, 4, rows_coupled(2, phi), cfg);
            return (fit.factors[0].F - fit.factors[1].F).norm();
        };
        const double coupled = gap(kPhi), free = gap(0.0);
        if (coupled < free) ++hits;
        d << fmt(coupled, 3) << "<" << fmt(free, 3) << " ";
    }
    return {hits >= kCouplingHits, std::to_string(hits) + "/10 seeds; " + d.str()};
}

Outcome c6() {
    double total = 0.0, raw_total = 0.0;
    std::ostringstream d;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SyntheticData s = generate(base_scenario(5.0, 600 + seed));
        PipelineConfig cfg;
        cfg.seed = seed;
        const CandidateResult c = fit_fixed_k(s.data, 4, rows_coupled(2, kPhi), cfg);
        const double f = multiview_scores(c.filtered, s.truth).f_score;
        const double raw = multiview_scores(c.raw, s.truth).f_score;
        total += f;
        raw_total += raw;
        d << fmt(f, 3) << " ";
    }
    const double mean = total / 10.0;
    return {mean >= kRecoveryFloor, "mean F-score " + fmt(mean) + " (before spurious removal " +
                                        fmt(raw_total / 10.0) + "); per seed " + d.str()};
}

Outcome c7() {
    int hits = 0;
    double csr_total = 0.0;
    std::ostringstream d;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SyntheticData s = generate(base_scenario(1.0, 700 + seed));
        PipelineConfig cfg;
        cfg.seed = seed;
        const SelectionTrace t = select_k(s.data, rows_coupled(2, kPhi), cfg);
        if (t.k_hat == 4) ++hits;
        std::size_t found = 0;
        for (std::size_t v = 0; v < s.data.size(); ++v) found = std::max(found, t.selected().counts[v]);
        csr_total += csr(static_cast<int>(found), 4);
        d << t.k_hat << " ";
    }
    const double mean_csr = csr_total / 10.0;
    return {hits >= kSelectionHits && mean_csr >= kCsrFloor,
            "K_hat = 4 in " + std::to_string(hits) + "/10, mean CSR " + fmt(mean_csr) + "; K_hat per seed " + d.str()};
}

Outcome c8() {
    int null_hits = 0, planted_hits = 0;
    std::ostringstream d;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SyntheticData s = generate(base_scenario(1.0, 800 + seed));
        const RestrictionWeights w = rows_coupled(2, kPhi);
        PipelineConfig cfg;
        cfg.seed = seed;

        std::mt19937_64 rng(derive_seed(seed, 0x8u));
        std::vector<Matrix> shuffled;
        for (const Matrix& x : s.data.views()) shuffled.push_back(shuffle_view(x, rng));
        const PipelineResult null_run = run(MultiViewDataset(std::move(shuffled)), w, cfg);
        std::size_t left = 0;
        for (std::size_t v = 0; v < 2; ++v) left += null_run.biclustering.count_nonempty(v);
        if (left == 0) ++null_hits;

        const CandidateResult c = fit_fixed_k(s.data, 4, w, cfg);
        const bool all = c.counts == std::vector<std::size_t>{4, 4};
        if (all) ++planted_hits;
        d << left << "/" << c.counts[0] << "," << c.counts[1] << " ";
    }
    return {null_hits >= kNullHits && planted_hits >= kPlantedHits,
            "null empty in " + std::to_string(null_hits) + "/10, planted kept in " + std::to_string(planted_hits) +
                "/10; per seed null-left/planted-kept " + d.str()};
}

Outcome c9() {
    SyntheticConfig sc = base_scenario(1.0, 9);
    sc.n_rows = 60;
    sc.n_cols = {40, 50};
    sc.k = 3;
    const SyntheticData s = generate(sc);
    const RestrictionWeights w = rows_coupled(2, kPhi);
    PipelineConfig cfg;
    cfg.seed = 9;

    std::mt19937_64 rng(99);
    int identical = 0;
    for (int trial = 0; trial < 20; ++trial) {
        MultiViewBiclustering bc;
        for (std::size_t v = 0; v < 2; ++v)
            bc.views.push_back(random_view_biclustering(rng, 60, s.data.view(v).cols(), 3, 20));
        StabilityConfig scfg;
        scfg.omega = 0.0;
        if (stability_filter(s.data, bc, w, scfg, cfg, derive_seed(9, trial)).biclustering == bc) ++identical;
    }

    const SyntheticData big = generate(base_scenario(1.0, 90));
    const std::vector<double> omegas{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    const auto rows = sweep_omega(big.data, w, omegas, cfg);
    bool monotone = true;
    std::ostringstream d;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t n = rows[i].counts[0] + rows[i].counts[1];
        d << n << " ";
        if (i > 0) {
            monotone = monotone && n <= rows[i - 1].counts[0] + rows[i - 1].counts[1];
            for (std::size_t v = 0; v < 2; ++v)
                for (std::size_t l = 0; l < rows[i].biclustering.views[v].size(); ++l)
                    if (!rows[i].biclustering.views[v][l].empty())
                        monotone = monotone && !rows[i - 1].biclustering.views[v][l].empty();
        }
    }
    return {identical == 20 && monotone, "omega=0 identity " + std::to_string(identical) +
                                             "/20; survivors over omega grid " + d.str()};
}

Outcome c10() {
    Matrix x = Matrix::Zero(12, 9);
    x.block(0, 0, 4, 3).setConstant(5.0);
    x.block(4, 3, 4, 3).setConstant(3.0);
    x.block(8, 6, 4, 3).setConstant(7.0);
    const ViewBiclustering blocks{{{0, 1, 2, 3}, {0, 1, 2}}, {{4, 5, 6, 7}, {3, 4, 5}}, {{8, 9, 10, 11}, {6, 7, 8}}};
    const double block_score = bicluster_score(x, 0, blocks, Distance::euclidean);
    const double empty_score = bisilhouette(x, ViewBiclustering{}, Distance::euclidean, 1).overall;

    int ordered = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const SyntheticData s = generate(base_scenario(1.0, 1000 + trial));
        std::mt19937_64 rng(derive_seed(trial, 0xAu));
        MultiViewBiclustering permuted = s.truth;
        std::vector<Index> rperm(200);
        std::iota(rperm.begin(), rperm.end(), Index{0});
        std::shuffle(rperm.begin(), rperm.end(), rng);
        for (std::size_t v = 0; v < s.data.size(); ++v) {
            std::vector<Index> cperm(static_cast<std::size_t>(s.data.view(v).cols()));
            std::iota(cperm.begin(), cperm.end(), Index{0});
            std::shuffle(cperm.begin(), cperm.end(), rng);
            for (Bicluster& b : permuted.views[v]) {
                for (Index& i : b.rows) i = rperm[static_cast<std::size_t>(i)];
                for (Index& j : b.cols) j = cperm[static_cast<std::size_t>(j)];
                b = Bicluster{make_index_set(b.rows), make_index_set(b.cols)};
            }
        }
        const double t = bisilhouette(s.data, s.truth, Distance::euclidean, trial).overall;
        const double p = bisilhouette(s.data, permuted, Distance::euclidean, trial).overall;
        if (t > p) ++ordered;
    }
    return {std::abs(block_score - 1.0) <= kBlockScoreTol && empty_score == 0.0 && ordered >= kOrderingHits,
            "constant block " + fmt(block_score, 12) + ", empty " + fmt(empty_score) + ", truth ahead in " +
                std::to_string(ordered) + "/100"};
}

Outcome c11() {
    int agree = 0;
    std::ostringstream d;
    for (int i = 0; i < 10; ++i) {
        const double sigma = 1.0 + 0.5 * (i % 5);
        const SyntheticData s = generate(base_scenario(sigma, 1100 + static_cast<std::uint64_t>(i)));
        PipelineConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(i);
        const auto score = [&](double phi) {
            const PipelineResult r = run(s.data, rows_coupled(2, phi), cfg);
            return std::pair{r.scores.bisilhouette.overall, multiview_scores(r.biclustering, s.truth).f_score};
        };
        const auto [bis_c, f_c] = score(kPhi);
        const auto [bis_u, f_u] = score(0.0);
        const int f_winner = (f_c > f_u) - (f_c < f_u);
        const int bis_winner = (bis_c > bis_u) - (bis_c < bis_u);
        const bool ok = f_winner == 0 || f_winner == bis_winner;
        if (ok) ++agree;
        d << "[s=" << sigma << " BiS " << fmt(bis_c, 3) << "/" << fmt(bis_u, 3) << " F " << fmt(f_c, 3) << "/"
          << fmt(f_u, 3) << (ok ? "" : " x") << "] ";
    }
    return {agree >= kAgreementHits, std::to_string(agree) + "/10 agree; " + d.str()};
}

Outcome c12() {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> len(1, 80);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::exponential_distribution<double> e(2.0);
    double asym = 0.0;
    bool in_range = true, self_zero = true;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> a(static_cast<std::size_t>(len(rng))), b(static_cast<std::size_t>(len(rng)));
        for (double& x : a) x = u(rng);
        for (double& x : b) x = trial % 2 ? e(rng) : u(rng);
        const double ab = jsd(a, b), ba = jsd(b, a);
        asym = std::max(asym, std::abs(ab - ba));
        in_range = in_range && ab >= 0.0 && ab <= 1.0;
        self_zero = self_zero && jsd(a, a) == 0.0;
    }
    return {asym <= kJsdTol && in_range && self_zero,
            "max asymmetry " + fmt(asym) + (in_range ? ", in [0,1]" : ", OUT OF RANGE") +
                (self_zero ? ", jsd(x,x)=0" : ", jsd(x,x)!=0")};
}

int shell(const std::string& cmd) {
    const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome c13() {
    const fs::path dir = fs::temp_directory_path() / "resnmtf_acceptance_13";
    fs::remove_all(dir);
    const std::string cli = RESNMTF_CLI_PATH;
    const std::string data = (dir / "data").string();
    if (shell(cli + " synth --rows 200 --cols 100,250 --k 4 --sigma 1 --seed 13 --out " + data) != 0)
        return {false, "synth failed"};
    std::vector<fs::path> outs;
    for (int i = 0; i < 2; ++i) {
        const fs::path out = dir / ("run" + std::to_string(i));
        const std::string cmd = cli + " run --views " + data + "/view1.csv " + data + "/view2.csv --phi 200 --omega 0.4" +
                                " --seed 13 --truth " + data + "/truth.json --out " + out.string();
        if (shell(cmd) != 0) return {false, "run " + std::to_string(i) + " failed"};
        outs.push_back(out);
    }
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(outs[0])) {
        const std::string name = entry.path().filename().string();
        if (name == "manifest.json") continue;   // records wall time
        if (io::read_file(entry.path()) != io::read_file(outs[1] / name))
            return {false, name + " differs between runs"};
        ++compared;
    }
    fs::remove_all(dir);
    return {compared >= 4, std::to_string(compared) + " output files byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria{
        {1, {"size splitting", c1}},
        {2, {"metric oracles", c2}},
        {3, {"objective monotonicity", c3}},
        {4, {"non-negativity and normalisation", c4}},
        {5, {"coupling effect", c5}},
        {6, {"planted recovery", c6}},
        {7, {"model-order selection", c7}},
        {8, {"spurious filter null behaviour", c8}},
        {9, {"stability filter", c9}},
        {10, {"bisilhouette sanity", c10}},
        {11, {"bisilhouette/F-score agreement", c11}},
        {12, {"JSD properties", c12}},
        {13, {"determinism", c13}},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    if (selected.empty())
        for (const auto& [n, _] : criteria) selected.push_back(n);

    bool all = true;
    for (int n : selected) {
        const auto it = criteria.find(n);
        if (it == criteria.end()) {
            std::cerr << "unknown criterion " << n << "\n";
            return 2;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = it->second.second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << n << " (" << it->second.first
                  << "): " << o.detail << "  [" << fmt(secs, 3) << " s]" << std::endl;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
