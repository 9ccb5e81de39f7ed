#include "resnmtf/metrics.hpp"

#include "resnmtf/errors.hpp"

#include <algorithm>
#include <cstdlib>

namespace resnmtf {

namespace {

std::size_t intersection_size(const IndexSet& a, const IndexSet& b) {
    std::size_t n = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

using JaccardFn = double (*)(const Bicluster&, const Bicluster&);

double best_match(const Bicluster& b, const ViewBiclustering& pool, JaccardFn jac) {
    double best = 0.0;
    for (const Bicluster& other : pool)
        if (!other.empty()) best = std::max(best, jac(b, other));
    return best;
}

double mean_best_match(const ViewBiclustering& from, const ViewBiclustering& to, JaccardFn jac) {
    double total = 0.0;
    std::size_t n = 0;
    for (const Bicluster& b : from) {
        if (b.empty()) continue;
        total += best_match(b, to, jac);
        ++n;
    }
    return n == 0 ? 0.0 : total / static_cast<double>(n);
}

int count_nonempty(const ViewBiclustering& bc) {
    return static_cast<int>(
        std::count_if(bc.begin(), bc.end(), [](const Bicluster& b) { return !b.empty(); }));
}

}  // namespace

double jaccard(const Bicluster& a, const Bicluster& b) {
    const double size_a = static_cast<double>(a.rows.size() * a.cols.size());
    const double size_b = static_cast<double>(b.rows.size() * b.cols.size());
    const double inter = static_cast<double>(intersection_size(a.rows, b.rows) *
                                             intersection_size(a.cols, b.cols));
    const double uni = size_a + size_b - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

double row_jaccard(const Bicluster& a, const Bicluster& b) {
    const double inter = static_cast<double>(intersection_size(a.rows, b.rows));
    const double uni = static_cast<double>(a.rows.size() + b.rows.size()) - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

double relevance(const ViewBiclustering& found, const ViewBiclustering& truth) {
    return mean_best_match(found, truth, &jaccard);
}

double recovery(const ViewBiclustering& found, const ViewBiclustering& truth) {
    return mean_best_match(truth, found, &jaccard);
}

double f_score(double rec, double rel) {
    const double sum = rec + rel;
    return sum > 0.0 ? 2.0 * rec * rel / sum : 0.0;
}

double f_score(const ViewBiclustering& found, const ViewBiclustering& truth) {
    return f_score(recovery(found, truth), relevance(found, truth));
}

double bicluster_relevance(std::size_t l, const ViewBiclustering& reference,
                           const ViewBiclustering& candidate) {
    const Bicluster& ref = reference.at(l);
    if (ref.empty()) return 0.0;
    return best_match(ref, candidate, &jaccard);
}

double csr(int k_hat, int k_true) {
    return 1.0 - static_cast<double>(std::abs(k_hat - k_true)) /
                     static_cast<double>(k_hat + k_true + 1);
}

EvalReport multiview_scores(const MultiViewBiclustering& found,
                            const MultiViewBiclustering& truth, bool rows_only) {
    if (found.n_views() != truth.n_views())
        throw DimensionMismatch("found and truth have different view counts");
    const JaccardFn jac = rows_only ? &row_jaccard : &jaccard;
    EvalReport report;
    for (std::size_t v = 0; v < found.n_views(); ++v) {
        ViewScores s;
        s.relevance = mean_best_match(found.views[v], truth.views[v], jac);
        s.recovery = mean_best_match(truth.views[v], found.views[v], jac);
        s.f_score = f_score(s.recovery, s.relevance);
        s.csr = csr(count_nonempty(found.views[v]), count_nonempty(truth.views[v]));
        report.relevance += s.relevance;
        report.recovery += s.recovery;
        report.f_score += s.f_score;
        report.csr += s.csr;
        report.per_view.push_back(s);
    }
    if (const auto n = static_cast<double>(found.n_views()); n > 0) {
        report.relevance /= n;
        report.recovery /= n;
        report.f_score /= n;
        report.csr /= n;
    }
    return report;
}

}  // namespace resnmtf
