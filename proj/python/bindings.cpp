#include "resnmtf/bisilhouette.hpp"
#include "resnmtf/errors.hpp"
#include "resnmtf/extraction.hpp"
#include "resnmtf/factorisation.hpp"
#include "resnmtf/metrics.hpp"
#include "resnmtf/pipeline.hpp"
#include "resnmtf/spurious.hpp"
#include "resnmtf/synthetic.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace resnmtf;

namespace {

// Biclusters cross the boundary as [view][k] -> (rows, cols) tuples.
using PyBiclustering = std::vector<std::vector<std::pair<IndexSet, IndexSet>>>;

PyBiclustering to_py(const MultiViewBiclustering& bc) {
    PyBiclustering out;
    for (const ViewBiclustering& v : bc.views) {
        auto& pv = out.emplace_back();
        for (const Bicluster& b : v) pv.emplace_back(b.rows, b.cols);
    }
    return out;
}

MultiViewBiclustering from_py(const PyBiclustering& py_bc) {
    MultiViewBiclustering bc;
    for (const auto& pv : py_bc) {
        ViewBiclustering v;
        for (const auto& [rows, cols] : pv) {
            Bicluster b{make_index_set(rows), make_index_set(cols)};
            if (b.empty()) b = Bicluster{};
            v.push_back(std::move(b));
        }
        bc.views.push_back(std::move(v));
    }
    return bc;
}

RestrictionWeights weights(std::size_t n_views, double phi, double xi, double psi) {
    return RestrictionWeights::broadcast(n_views, phi, xi, psi);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multi-view biclustering by restricted non-negative matrix tri-factorisation.";

    py::register_exception<Error>(m, "Error", PyExc_ValueError);

    m.def("split_sizes", &split_sizes, py::arg("total"), py::arg("k"));

    m.def(
        "generate",
        [](Index n_rows, std::vector<Index> n_cols, int k, double mu, double sigma_b, double sigma,
           double overlap, double nonexhaustive, bool offset_sizing, std::uint64_t seed) {
            SyntheticConfig cfg;
            cfg.n_rows = n_rows;
            cfg.n_cols = std::move(n_cols);
            cfg.k = k;
            cfg.mu = mu;
            cfg.sigma_b = sigma_b;
            cfg.sigma = sigma;
            cfg.overlap = overlap;
            cfg.nonexhaustive = nonexhaustive;
            cfg.offset_sizing = offset_sizing;
            cfg.seed = seed;
            SyntheticData d = generate(cfg);
            return py::make_tuple(d.data.views(), to_py(d.truth));
        },
        py::arg("n_rows") = 200, py::arg("n_cols") = std::vector<Index>{100, 250}, py::arg("k") = 4,
        py::arg("mu") = 5.0, py::arg("sigma_b") = 1.0, py::arg("sigma") = 5.0, py::arg("overlap") = 0.0,
        py::arg("nonexhaustive") = 0.0, py::arg("offset_sizing") = false, py::arg("seed") = 0);

    m.def(
        "solve",
        [](std::vector<Matrix> views, int k, double phi, double xi, double psi, std::uint64_t seed,
           int max_iters, double tol) {
            PipelineConfig cfg;
            cfg.seed = seed;
            cfg.max_iters = max_iters;
            cfg.tol = tol;
            const std::size_t n = views.size();
            SolveResult r;
            {
                py::gil_scoped_release release;
                r = solve(MultiViewDataset(std::move(views)), k, weights(n, phi, xi, psi), cfg);
            }
            py::list factors;
            for (const ViewFactors& f : r.factors) {
                py::dict d;
                d["F"] = f.F;
                d["S"] = f.S;
                d["G"] = f.G;
                factors.append(d);
            }
            py::dict out;
            out["factors"] = factors;
            out["iterations"] = r.iterations();
            out["converged"] = r.converged;
            out["biclusters"] = to_py(extract(r.factors));
            return out;
        },
        py::arg("views"), py::arg("k"), py::arg("phi") = 0.0, py::arg("xi") = 0.0, py::arg("psi") = 0.0,
        py::arg("seed") = 0, py::arg("max_iters") = 1000, py::arg("tol") = 1e-6);

    m.def(
        "run",
        [](std::vector<Matrix> views, double phi, double xi, double psi, int k_min, int k_max,
           std::optional<double> omega, int n_repeats, int n_stability, int max_iters,
           const std::string& distance, std::uint64_t seed) {
            PipelineConfig cfg;
            cfg.k_min = k_min;
            cfg.k_max = k_max;
            cfg.stability = omega.has_value();
            cfg.omega = omega.value_or(cfg.omega);
            cfg.n_repeats = n_repeats;
            cfg.n_stability = n_stability;
            cfg.max_iters = max_iters;
            cfg.distance = parse_distance(distance);
            cfg.seed = seed;
            const std::size_t n = views.size();
            PipelineResult r;
            {
                py::gil_scoped_release release;
                r = run(MultiViewDataset(std::move(views)), weights(n, phi, xi, psi), cfg);
            }
            py::list candidates;
            for (const CandidateResult& c : r.trace.candidates) {
                py::dict d;
                d["k"] = c.k;
                d["bisilhouette"] = c.bisilhouette;
                d["counts"] = c.counts;
                d["iterations"] = c.iterations;
                candidates.append(d);
            }
            py::dict out;
            out["biclusters"] = to_py(r.biclustering);
            out["k_hat"] = r.trace.k_hat;
            out["range_cap_reached"] = r.trace.range_cap_reached;
            out["bisilhouette"] = r.scores.bisilhouette.overall;
            out["stability_relevance"] = r.scores.stability_relevance;
            out["candidates"] = candidates;
            return out;
        },
        py::arg("views"), py::arg("phi") = 0.0, py::arg("xi") = 0.0, py::arg("psi") = 0.0,
        py::arg("k_min") = 3, py::arg("k_max") = 8, py::arg("omega") = py::none(), py::arg("n_repeats") = 10,
        py::arg("n_stability") = 5, py::arg("max_iters") = 1000, py::arg("distance") = "euclidean",
        py::arg("seed") = 0);

    m.def(
        "bisilhouette",
        [](std::vector<Matrix> views, const PyBiclustering& bc, const std::string& distance,
           std::uint64_t seed) {
            const MultiViewDataset data(std::move(views));
            const MultiViewBiclustering b = from_py(bc);
            validate_biclustering(b, data);
            return bisilhouette(data, b, parse_distance(distance), seed).overall;
        },
        py::arg("views"), py::arg("biclusters"), py::arg("distance") = "euclidean", py::arg("seed") = 0);

    m.def(
        "scores",
        [](const PyBiclustering& found, const PyBiclustering& truth, bool rows_only) {
            const EvalReport r = multiview_scores(from_py(found), from_py(truth), rows_only);
            py::dict out;
            out["relevance"] = r.relevance;
            out["recovery"] = r.recovery;
            out["f_score"] = r.f_score;
            out["csr"] = r.csr;
            return out;
        },
        py::arg("found"), py::arg("truth"), py::arg("rows_only") = false);

    m.def(
        "jsd",
        [](const std::vector<double>& a, const std::vector<double>& b, int bins) { return jsd(a, b, bins); },
        py::arg("a"), py::arg("b"), py::arg("bins") = 50);
}
