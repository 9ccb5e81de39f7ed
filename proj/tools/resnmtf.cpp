// Command-line front end: run, synth, score, sweep.
#include "resnmtf/bisilhouette.hpp"
#include "resnmtf/errors.hpp"
#include "resnmtf/io.hpp"
#include "resnmtf/metrics.hpp"
#include "resnmtf/pipeline.hpp"
#include "resnmtf/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace resnmtf;

namespace {

struct DataOptions {
    std::vector<std::string> views;
    bool transpose = false;
    bool allow_negative_shift = false;
    bool drop_low_variance = false;
    double variance_floor = 1e-12;
};

struct WeightOptions {
    std::string phi = "0", xi = "0", psi = "0";
};

struct RunOptions {
    DataOptions data;
    WeightOptions weights;
    PipelineConfig cfg;
    std::optional<double> omega;
    bool no_stability = false;
    std::string distance = "euclidean";
    std::string out;
    std::string truth;
    bool rows_only = false;
};

// Manifest for the current invocation; written last, and also on failure
// so a directory never holds outputs without one.
struct Manifest {
    std::string command;
    json config = json::object();
    json inputs = json::array();
    json outputs = json::array();
    json warnings = json::array();
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void input(const std::string& path) {
        inputs.push_back({{"path", path}, {"fnv1a64", io::digest(io::read_file(path))}});
    }
    void write(const fs::path& dir, const std::string& status, const std::string& message = {}) const {
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json doc = {{"tool", "resnmtf"},
                    {"version", RESNMTF_VERSION},
                    {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                  "." + std::to_string(EIGEN_MINOR_VERSION)},
                    {"command", command},
                    {"status", status},
                    {"config", config},
                    {"inputs", inputs},
                    {"outputs", outputs},
                    {"warnings", warnings},
                    {"wall_seconds", seconds}};
        if (!message.empty()) doc["error"] = message;
        fs::create_directories(dir);
        io::write_atomic(dir / "manifest.json", doc.dump(2) + "\n");
    }
};

struct LoadedData {
    MultiViewDataset data;
    std::vector<std::vector<Index>> kept;
    std::vector<double> shifts;
};

LoadedData load_data(const DataOptions& opt, Manifest& manifest) {
    std::vector<Matrix> raw;
    LoadedData out;
    for (const std::string& path : opt.views) {
        manifest.input(path);
        io::LoadedView lv = io::load_view(path, opt.allow_negative_shift);
        raw.push_back(opt.transpose ? Matrix(lv.data.transpose()) : std::move(lv.data));
        out.shifts.push_back(lv.shift);
    }
    io::Preprocessed pp = io::preprocess(raw, opt.drop_low_variance, opt.variance_floor);
    out.data = MultiViewDataset(std::move(pp.views));
    out.kept = std::move(pp.kept);
    return out;
}

Matrix weight_matrix(const std::string& spec, std::size_t n_views, const char* name,
                     Manifest& manifest) {
    try {
        std::size_t used = 0;
        const double value = std::stod(spec, &used);
        if (used == spec.size()) {
            Matrix m = Matrix::Zero(static_cast<Index>(n_views), static_cast<Index>(n_views));
            for (std::size_t u = 0; u < n_views; ++u)
                for (std::size_t v = u + 1; v < n_views; ++v) m(static_cast<Index>(u), static_cast<Index>(v)) = value;
            return m;
        }
    } catch (const std::invalid_argument&) {
    } catch (const std::out_of_range&) {
        throw InvalidConfig(std::string("--") + name + " value out of range");
    }
    if (!fs::exists(spec))
        throw InvalidConfig(std::string("--") + name + " is neither a number nor a weights file: " + spec);
    manifest.input(spec);
    return io::parse_pair_weights(io::read_file(spec), n_views);
}

RestrictionWeights weights(const WeightOptions& opt, std::size_t n_views, Manifest& manifest) {
    return RestrictionWeights(weight_matrix(opt.phi, n_views, "phi", manifest),
                              weight_matrix(opt.xi, n_views, "xi", manifest),
                              weight_matrix(opt.psi, n_views, "psi", manifest));
}

json config_json(const RunOptions& o, const RestrictionWeights& w) {
    const auto mat = [](const Matrix& m) {
        json rows = json::array();
        for (Index i = 0; i < m.rows(); ++i) {
            json r = json::array();
            for (Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
            rows.push_back(r);
        }
        return rows;
    };
    const PipelineConfig& c = o.cfg;
    return {{"k_min", c.k_min},
            {"k_max", c.k_max},
            {"k_cap", c.k_max + c.k_cap_extra},
            {"sigma_n", c.sigma_n},
            {"tol", c.tol},
            {"max_iters", c.max_iters},
            {"n_r", c.n_repeats},
            {"jsd_bins", c.jsd_bins},
            {"n_s", c.n_stability},
            {"alpha", c.alpha},
            {"omega", c.stability ? json(c.omega) : json(nullptr)},
            {"stability", c.stability},
            {"distance", to_string(c.distance)},
            {"seed", c.seed},
            {"transpose", o.data.transpose},
            {"allow_negative_shift", o.data.allow_negative_shift},
            {"drop_low_variance", o.data.drop_low_variance},
            {"variance_floor", o.data.variance_floor},
            {"rows_only", o.rows_only},
            {"phi", mat(w.phi())},
            {"xi", mat(w.xi())},
            {"psi", mat(w.psi())}};
}

void add_data_options(CLI::App* app, DataOptions& d) {
    app->add_option("--views", d.views, "View CSV files")->required()->check(CLI::ExistingFile);
    app->add_flag("--transpose", d.transpose, "Transpose every view at load time");
    app->add_flag("--allow-negative-shift", d.allow_negative_shift,
                  "Shift views with negative entries by their global minimum");
    app->add_flag("--drop-low-variance", d.drop_low_variance,
                  "Also drop columns with variance below --variance-floor");
    app->add_option("--variance-floor", d.variance_floor, "Variance floor")->check(CLI::NonNegativeNumber);
}

void add_run_options(CLI::App* app, RunOptions& o) {
    add_data_options(app, o.data);
    app->add_option("--phi", o.weights.phi, "Row restriction: scalar for every pair, or a 'v,w,value' file");
    app->add_option("--xi", o.weights.xi, "S restriction: scalar or pair-list file");
    app->add_option("--psi", o.weights.psi, "Column restriction: scalar or pair-list file");
    app->add_option("--k-min", o.cfg.k_min, "Smallest K tried")->check(CLI::Range(3, 1000));
    app->add_option("--k-max", o.cfg.k_max, "Largest K of the initial range");
    app->add_option("--k-extra", o.cfg.k_cap_extra, "How far past --k-max the range may extend");
    app->add_option("--omega", o.omega, "Stability threshold in [0,1]")->check(CLI::Range(0.0, 1.0));
    app->add_flag("--no-stability", o.no_stability, "Skip the stability filter");
    app->add_option("--alpha", o.cfg.alpha, "Subsample rate")->check(CLI::Range(0.0, 1.0));
    app->add_option("--n-s", o.cfg.n_stability, "Stability repetitions")->check(CLI::PositiveNumber);
    app->add_option("--n-r", o.cfg.n_repeats, "Shuffled refits per K")->check(CLI::Range(2, 100000));
    app->add_option("--bins", o.cfg.jsd_bins, "JSD histogram bins")->check(CLI::PositiveNumber);
    app->add_option("--tol", o.cfg.tol, "Convergence tolerance")->check(CLI::PositiveNumber);
    app->add_option("--max-iters", o.cfg.max_iters, "Iteration cap")->check(CLI::NonNegativeNumber);
    app->add_option("--distance", o.distance, "Bisilhouette distance")
        ->check(CLI::IsMember({"euclidean", "cosine", "manhattan"}));
    app->add_option("--seed", o.cfg.seed, "Seed");
    app->add_option("--truth", o.truth, "Ground-truth biclusters JSON")->check(CLI::ExistingFile);
    app->add_flag("--rows-only", o.rows_only, "Extrinsic scores on row clusters only");
}

void finalise_run_options(RunOptions& o, bool omega_needed) {
    o.cfg.distance = parse_distance(o.distance);
    o.cfg.stability = !o.no_stability;
    if (o.cfg.stability && omega_needed) {
        if (!o.omega) throw InvalidConfig("--omega is required (or pass --no-stability)");
        o.cfg.omega = *o.omega;
    }
    o.cfg.validate();
}

std::optional<MultiViewBiclustering> load_truth(const RunOptions& o, Manifest& m) {
    if (o.truth.empty()) return std::nullopt;
    m.input(o.truth);
    return io::load_biclusters(o.truth);
}

int cmd_run(RunOptions& o, Manifest& manifest) {
    finalise_run_options(o, true);
    const LoadedData ld = load_data(o.data, manifest);
    const RestrictionWeights w = weights(o.weights, ld.data.size(), manifest);
    manifest.config = config_json(o, w);
    const auto truth = load_truth(o, manifest);

    const PipelineResult r = run(ld.data, w, o.cfg);
    if (r.trace.range_cap_reached)
        manifest.warnings.push_back("RangeCapReached: best K is still the largest K tried (" +
                                    std::to_string(r.trace.k_hat) + ")");
    const MultiViewBiclustering found = io::to_original_columns(r.biclustering, ld.kept);

    std::optional<EvalReport> scores;
    if (truth) {
        if (truth->n_views() != found.n_views())
            throw DimensionMismatch("truth has a different number of views");
        scores = multiview_scores(found, *truth, o.rows_only);
    }
    io::OutputBundle bundle{&found, &r.trace, &r.scores.bisilhouette, scores ? &*scores : nullptr,
                            o.data.transpose};
    for (const std::string& f : io::save_outputs(bundle, o.out)) manifest.outputs.push_back(f);
    manifest.config["k_hat"] = r.trace.k_hat;

    std::cout << "K_hat " << r.trace.k_hat << "  bisilhouette " << io::format_number(r.scores.bisilhouette.overall);
    for (std::size_t v = 0; v < found.n_views(); ++v) std::cout << "  view" << v + 1 << " " << found.count_nonempty(v);
    if (scores) std::cout << "  f_score " << io::format_number(scores->f_score);
    std::cout << "\n";
    return 0;
}

int cmd_synth(SyntheticConfig& sc, int n_views, const std::string& cols, const std::string& out,
              Manifest& manifest) {
    std::vector<Index> n_cols;
    {
        std::stringstream ss(cols);
        std::string tok;
        while (std::getline(ss, tok, ','))
            try {
                n_cols.push_back(std::stol(tok));
            } catch (const std::exception&) {
                throw InvalidConfig("--cols must be a comma-separated list of integers");
            }
    }
    if (n_views > 0) {
        if (n_cols.size() == 1) n_cols.assign(static_cast<std::size_t>(n_views), n_cols.front());
        if (n_cols.size() != static_cast<std::size_t>(n_views))
            throw InvalidConfig("--views does not match the number of --cols entries");
    }
    sc.n_cols = n_cols;
    manifest.config = {{"rows", sc.n_rows}, {"cols", n_cols}, {"k", sc.k}, {"mu", sc.mu},
                       {"sigma_b", sc.sigma_b}, {"sigma", sc.sigma}, {"overlap", sc.overlap},
                       {"nonexhaustive", sc.nonexhaustive}, {"offset_sizing", sc.offset_sizing},
                       {"seed", sc.seed}};
    const SyntheticData d = generate(sc);
    fs::create_directories(out);
    for (std::size_t v = 0; v < d.data.size(); ++v) {
        const Matrix& x = d.data.view(v);
        std::string text;
        for (Index i = 0; i < x.rows(); ++i) {
            for (Index j = 0; j < x.cols(); ++j) {
                if (j) text += ',';
                text += io::format_number(x(i, j));
            }
            text += '\n';
        }
        const std::string name = "view" + std::to_string(v + 1) + ".csv";
        io::write_atomic(fs::path(out) / name, text);
        manifest.outputs.push_back(name);
    }
    io::write_atomic(fs::path(out) / "truth.json", io::biclusters_json(d.truth));
    manifest.outputs.push_back("truth.json");
    std::cout << "wrote " << d.data.size() << " views and truth.json to " << out << "\n";
    return 0;
}

int cmd_score(RunOptions& o, const std::string& biclusters, Manifest& manifest) {
    o.cfg.distance = parse_distance(o.distance);
    const LoadedData ld = load_data(o.data, manifest);
    manifest.input(biclusters);
    manifest.config = {{"distance", o.distance}, {"seed", o.cfg.seed}, {"transpose", o.data.transpose},
                       {"rows_only", o.rows_only}};
    // Scores are computed on the files as given, so undo the column filtering.
    std::vector<Matrix> raw;
    for (const std::string& path : o.data.views) {
        Matrix x = io::load_view(path, o.data.allow_negative_shift).data;
        raw.push_back(o.data.transpose ? Matrix(x.transpose()) : x);
    }
    const MultiViewDataset data(std::move(raw));
    const MultiViewBiclustering bc = io::load_biclusters(biclusters);
    validate_biclustering(bc, data);
    const auto truth = load_truth(o, manifest);

    const MultiViewBisilhouette bis = bisilhouette(data, bc, o.cfg.distance, o.cfg.seed);
    std::optional<EvalReport> scores;
    if (truth) scores = multiview_scores(bc, *truth, o.rows_only);
    io::OutputBundle bundle{&bc, nullptr, &bis, scores ? &*scores : nullptr, o.data.transpose};
    for (const std::string& f : io::save_outputs(bundle, o.out)) manifest.outputs.push_back(f);

    std::cout << "bisilhouette " << io::format_number(bis.overall);
    if (scores) std::cout << "  relevance " << io::format_number(scores->relevance) << "  recovery "
                          << io::format_number(scores->recovery) << "  f_score " << io::format_number(scores->f_score);
    std::cout << "\n";
    return 0;
}

int cmd_sweep(RunOptions& o, const std::string& param, const std::vector<double>& values,
              Manifest& manifest) {
    const bool omega_sweep = param == "omega";
    if (omega_sweep) o.no_stability = false;
    finalise_run_options(o, !omega_sweep);
    const LoadedData ld = load_data(o.data, manifest);
    const RestrictionWeights w = weights(o.weights, ld.data.size(), manifest);
    manifest.config = config_json(o, w);
    manifest.config["sweep"] = {{"param", param}, {"values", values}};
    const auto truth = load_truth(o, manifest);

    std::ostringstream csv;
    csv << param << ",bisilhouette,k_hat";
    for (std::size_t v = 0; v < ld.data.size(); ++v) csv << ",count_view" << v + 1;
    csv << (omega_sweep ? "" : ",restrictions") << (truth ? ",f_score" : "") << ",best\n";

    const auto f_of = [&](const MultiViewBiclustering& bc) {
        return multiview_scores(io::to_original_columns(bc, ld.kept), *truth, o.rows_only).f_score;
    };
    if (omega_sweep) {
        const auto rows = sweep_omega(ld.data, w, values, o.cfg);
        std::size_t best = 0;
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i].bisilhouette > rows[best].bisilhouette) best = i;
        const int k_hat = static_cast<int>(rows.front().biclustering.n_biclusters());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            csv << io::format_number(rows[i].omega) << ',' << io::format_number(rows[i].bisilhouette) << ','
                << k_hat;
            for (std::size_t n : rows[i].counts) csv << ',' << n;
            if (truth) csv << ',' << io::format_number(f_of(rows[i].biclustering));
            csv << ',' << (i == best ? 1 : 0) << '\n';
        }
    } else {
        const auto kind = param == "phi" ? RestrictionWeights::Kind::phi
                          : param == "xi" ? RestrictionWeights::Kind::xi
                                          : RestrictionWeights::Kind::psi;
        const SweepTable t = sweep_restriction(ld.data, kind, values, w, o.cfg);
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const SweepRow& r = t.rows[i];
            csv << io::format_number(r.value) << ',' << io::format_number(r.bisilhouette) << ',' << r.k_hat;
            for (std::size_t n : r.counts) csv << ',' << n;
            csv << ',' << (r.restrictions ? 1 : 0);
            if (truth) csv << ',' << io::format_number(f_of(r.biclustering));
            csv << ',' << (i == t.best ? 1 : 0) << '\n';
        }
    }
    fs::create_directories(o.out);
    io::write_atomic(fs::path(o.out) / "sweep.csv", csv.str());
    manifest.outputs.push_back("sweep.csv");
    std::cout << csv.str();
    return 0;
}

int exit_code(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::usage: return 1;
        case ErrorCategory::data: return 2;
        case ErrorCategory::numerical: return 3;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-view biclustering by restricted non-negative matrix tri-factorisation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", RESNMTF_VERSION);

    RunOptions run_opt;
    CLI::App* run_cmd = app.add_subcommand("run", "Select K, fit, filter and write biclusters");
    add_run_options(run_cmd, run_opt);
    run_cmd->add_option("--out", run_opt.out, "Output directory")->required();

    SyntheticConfig sc;
    int synth_views = 0;
    std::string synth_cols = "100,250", synth_out;
    CLI::App* synth_cmd = app.add_subcommand("synth", "Generate planted multi-view data");
    synth_cmd->add_option("--rows", sc.n_rows, "Shared row count");
    synth_cmd->add_option("--cols", synth_cols, "Columns per view, comma-separated");
    synth_cmd->add_option("--views", synth_views, "Number of views (a single --cols value is repeated)");
    synth_cmd->add_option("--k", sc.k, "Number of biclusters");
    synth_cmd->add_option("--mu", sc.mu, "Block mean");
    synth_cmd->add_option("--sigma-b", sc.sigma_b, "Within-block standard deviation");
    synth_cmd->add_option("--sigma", sc.sigma, "Noise standard deviation");
    synth_cmd->add_option("--overlap", sc.overlap, "Overlap rate r_o");
    synth_cmd->add_option("--nonexhaustive", sc.nonexhaustive, "Non-exhaustivity rate r_e");
    synth_cmd->add_flag("--offset-sizing", sc.offset_sizing, "Split n - K, then add one per bicluster");
    synth_cmd->add_option("--seed", sc.seed, "Seed");
    synth_cmd->add_option("--out", synth_out, "Output directory")->required();

    RunOptions score_opt;
    std::string score_bc;
    CLI::App* score_cmd = app.add_subcommand("score", "Bisilhouette and extrinsic scores of saved biclusters");
    add_data_options(score_cmd, score_opt.data);
    score_cmd->add_option("--biclusters", score_bc, "biclusters.json")->required()->check(CLI::ExistingFile);
    score_cmd->add_option("--truth", score_opt.truth, "Ground-truth biclusters JSON")->check(CLI::ExistingFile);
    score_cmd->add_flag("--rows-only", score_opt.rows_only, "Extrinsic scores on row clusters only");
    score_cmd->add_option("--distance", score_opt.distance, "Bisilhouette distance")
        ->check(CLI::IsMember({"euclidean", "cosine", "manhattan"}));
    score_cmd->add_option("--seed", score_opt.cfg.seed, "Seed for the bisilhouette augmentation");
    score_cmd->add_option("--out", score_opt.out, "Output directory")->required();

    RunOptions sweep_opt;
    std::string sweep_param;
    std::vector<double> sweep_values;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Hyperparameter grid over phi, xi, psi or omega");
    add_run_options(sweep_cmd, sweep_opt);
    sweep_cmd->add_option("--param", sweep_param, "Swept hyperparameter")
        ->required()
        ->check(CLI::IsMember({"phi", "xi", "psi", "omega"}));
    sweep_cmd->add_option("--values", sweep_values, "Grid values (space or comma separated)")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--out", sweep_opt.out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    Manifest manifest;
    std::string out_dir;
    try {
        if (*run_cmd) {
            manifest.command = "run";
            out_dir = run_opt.out;
            cmd_run(run_opt, manifest);
        } else if (*synth_cmd) {
            manifest.command = "synth";
            out_dir = synth_out;
            cmd_synth(sc, synth_views, synth_cols, synth_out, manifest);
        } else if (*score_cmd) {
            manifest.command = "score";
            out_dir = score_opt.out;
            cmd_score(score_opt, score_bc, manifest);
        } else {
            manifest.command = "sweep";
            out_dir = sweep_opt.out;
            cmd_sweep(sweep_opt, sweep_param, sweep_values, manifest);
        }
        manifest.write(out_dir, "ok");
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        try {
            manifest.write(out_dir, "error", e.what());
        } catch (const std::exception&) {
        }
        return exit_code(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        try {
            manifest.write(out_dir, "error", e.what());
        } catch (const std::exception&) {
        }
        return 2;
    }
}
