#include "resnmtf/io.hpp"

#include "resnmtf/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace resnmtf::io {

using json = nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
    const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r'; };
    while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_double(std::string_view token) {
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) return std::nullopt;
    return value;
}

}  // namespace

LoadedView parse_view(const std::string& text, bool allow_negative_shift) {
    std::vector<std::string_view> lines;
    {
        std::string_view rest(text);
        while (!rest.empty()) {
            const std::size_t nl = rest.find('\n');
            lines.push_back(rest.substr(0, nl));
            if (nl == std::string_view::npos) break;
            rest.remove_prefix(nl + 1);
        }
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw EmptyView("view file has no rows");

    LoadedView out;
    std::size_t first = 0;
    {
        const auto fields = split_fields(lines.front());
        const bool numeric = std::all_of(fields.begin(), fields.end(),
                                         [](std::string_view f) { return parse_double(f).has_value(); });
        if (!numeric) {
            for (auto f : fields) out.header.emplace_back(f);
            first = 1;
        }
    }
    if (first == lines.size()) throw EmptyView("view file has a header but no rows");

    const std::size_t n_cols = split_fields(lines[first]).size();
    out.data.resize(static_cast<Index>(lines.size() - first), static_cast<Index>(n_cols));
    for (std::size_t r = first; r < lines.size(); ++r) {
        const auto fields = split_fields(lines[r]);
        if (fields.size() != n_cols)
            throw RaggedRows("line " + std::to_string(r + 1) + " has " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(n_cols));
        for (std::size_t c = 0; c < n_cols; ++c) {
            const auto value = parse_double(fields[c]);
            if (!value || !std::isfinite(*value))
                throw ParseError("row " + std::to_string(r + 1) + ", column " + std::to_string(c + 1) +
                                 ": cannot parse '" + std::string(fields[c]) + "'");
            out.data(static_cast<Index>(r - first), static_cast<Index>(c)) = *value;
        }
    }

    const double min = out.data.minCoeff();
    if (min < 0.0) {
        if (!allow_negative_shift)
            throw NegativeEntry("negative entry " + format_number(min) +
                                " (use --allow-negative-shift to shift by the global minimum)");
        out.data.array() -= min;
        out.shift = min;
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LoadedView load_view(const std::filesystem::path& path, bool allow_negative_shift) {
    try {
        return parse_view(read_file(path), allow_negative_shift);
    } catch (const Error& e) {
        // Same error type, message prefixed with the file name.
        if (dynamic_cast<const RaggedRows*>(&e)) throw RaggedRows(path.string() + ": " + e.what());
        if (dynamic_cast<const NegativeEntry*>(&e)) throw NegativeEntry(path.string() + ": " + e.what());
        if (dynamic_cast<const EmptyView*>(&e)) throw EmptyView(path.string() + ": " + e.what());
        throw ParseError(path.string() + ": " + e.what());
    }
}

Preprocessed preprocess(const std::vector<Matrix>& views, bool drop_low_variance,
                        double variance_floor) {
    if (variance_floor < 0.0) throw InvalidConfig("variance floor must be >= 0");
    Preprocessed out;
    for (const Matrix& x : views) {
        std::vector<Index> keep;
        for (Index j = 0; j < x.cols(); ++j) {
            const auto col = x.col(j);
            if ((col.array() == 0.0).all()) continue;
            if (drop_low_variance) {
                const double mean = col.mean();
                const double var = (col.array() - mean).square().mean();
                if (var < variance_floor) continue;
            }
            keep.push_back(j);
        }
        if (keep.empty()) throw EmptyView("preprocessing removed every column of a view");
        Matrix kept(x.rows(), static_cast<Index>(keep.size()));
        for (std::size_t j = 0; j < keep.size(); ++j) kept.col(static_cast<Index>(j)) = x.col(keep[j]);
        out.views.push_back(std::move(kept));
        out.kept.push_back(std::move(keep));
    }
    return out;
}

MultiViewBiclustering to_original_columns(const MultiViewBiclustering& bc,
                                          const std::vector<std::vector<Index>>& kept) {
    if (kept.size() != bc.n_views()) throw DimensionMismatch("one column map per view is needed");
    MultiViewBiclustering out = bc;
    for (std::size_t v = 0; v < out.n_views(); ++v)
        for (Bicluster& b : out.views[v])
            for (Index& j : b.cols) j = kept[v].at(static_cast<std::size_t>(j));
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError("cannot write " + tmp.string());
        out << contents;
        if (!out.flush()) throw ParseError("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string format_number(double x) {
    if (x == 0.0) return "0";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

std::string biclusters_json(const MultiViewBiclustering& bc, bool transposed) {
    json views = json::array();
    for (std::size_t v = 0; v < bc.n_views(); ++v) {
        json list = json::array();
        for (std::size_t k = 0; k < bc.views[v].size(); ++k) {
            const Bicluster& b = bc.views[v][k];
            json rows = json::array(), cols = json::array();
            if (!b.empty()) {
                for (Index i : b.rows) rows.push_back(i + 1);
                for (Index j : b.cols) cols.push_back(j + 1);
            }
            list.push_back({{"id", k + 1}, {"rows", rows}, {"cols", cols}});
        }
        views.push_back({{"view", v + 1}, {"biclusters", list}});
    }
    json doc = {{"indexing", "1-based"},
                {"n_views", bc.n_views()},
                {"n_biclusters", bc.n_biclusters()},
                {"transposed", transposed},
                {"views", views}};
    return doc.dump(1) + "\n";
}

MultiViewBiclustering parse_biclusters_json(const std::string& text) {
    MultiViewBiclustering out;
    try {
        const json doc = json::parse(text);
        for (const json& view : doc.at("views")) {
            ViewBiclustering vb;
            for (const json& b : view.at("biclusters")) {
                std::vector<Index> rows, cols;
                for (const json& i : b.at("rows")) rows.push_back(i.get<Index>() - 1);
                for (const json& j : b.at("cols")) cols.push_back(j.get<Index>() - 1);
                const auto negative = [](Index i) { return i < 0; };
                if (std::any_of(rows.begin(), rows.end(), negative) ||
                    std::any_of(cols.begin(), cols.end(), negative))
                    throw ParseError("bicluster indices are 1-based");
                Bicluster bic{make_index_set(std::move(rows)), make_index_set(std::move(cols))};
                if (bic.empty()) bic = Bicluster{};
                vb.push_back(std::move(bic));
            }
            out.views.push_back(std::move(vb));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("biclusters JSON: ") + e.what());
    }
    for (const ViewBiclustering& vb : out.views)
        if (vb.size() != out.n_biclusters())
            throw DimensionMismatch("every view must list the same number of biclusters");
    return out;
}

MultiViewBiclustering load_biclusters(const std::filesystem::path& path) {
    return parse_biclusters_json(read_file(path));
}

std::string selection_csv(const SelectionTrace& trace) {
    std::ostringstream out;
    const std::size_t n_views = trace.candidates.empty() ? 0 : trace.candidates.front().counts.size();
    out << "k,bisilhouette";
    for (std::size_t v = 0; v < n_views; ++v) out << ",count_view" << v + 1;
    out << ",iterations,converged,selected\n";
    for (const CandidateResult& c : trace.candidates) {
        out << c.k << ',' << format_number(c.bisilhouette);
        for (std::size_t n : c.counts) out << ',' << n;
        out << ',' << c.iterations << ',' << (c.converged ? 1 : 0) << ',' << (c.k == trace.k_hat ? 1 : 0)
            << '\n';
    }
    return out.str();
}

std::string scores_csv(const EvalReport& report, const MultiViewBisilhouette& bis) {
    std::ostringstream out;
    out << "view,relevance,recovery,f_score,csr,bisilhouette\n";
    for (std::size_t v = 0; v < report.per_view.size(); ++v) {
        const ViewScores& s = report.per_view[v];
        const double b = v < bis.per_view.size() ? bis.per_view[v].overall : 0.0;
        out << v + 1 << ',' << format_number(s.relevance) << ',' << format_number(s.recovery) << ','
            << format_number(s.f_score) << ',' << format_number(s.csr) << ',' << format_number(b) << '\n';
    }
    out << "mean," << format_number(report.relevance) << ',' << format_number(report.recovery) << ','
        << format_number(report.f_score) << ',' << format_number(report.csr) << ','
        << format_number(bis.overall) << '\n';
    return out.str();
}

std::string bisilhouette_plot_csv(const BisilhouetteReport& report) {
    std::ostringstream out;
    out << "bicluster,row,s,mean\n";
    for (std::size_t k = 0; k < report.coefficients.size(); ++k)
        for (const RowCoefficient& c : report.coefficients[k])
            out << k + 1 << ',' << c.row + 1 << ',' << format_number(c.value) << ','
                << format_number(report.overall) << '\n';
    return out.str();
}

Matrix parse_pair_weights(const std::string& text, std::size_t n_views) {
    Matrix m = Matrix::Zero(static_cast<Index>(n_views), static_cast<Index>(n_views));
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto fields = split_fields(t);
        const auto fail = [&](const std::string& why) {
            throw ParseError("weights line " + std::to_string(line_no) + ": " + why);
        };
        if (fields.size() != 3) fail("expected 'v,w,value'");
        const auto a = parse_double(fields[0]), b = parse_double(fields[1]), w = parse_double(fields[2]);
        if (!a || !b || !w) fail("cannot parse '" + std::string(t) + "'");
        const auto u = static_cast<long>(*a), v = static_cast<long>(*b);
        if (u != *a || v != *b || u < 1 || v < 1 || u > static_cast<long>(n_views) ||
            v > static_cast<long>(n_views) || u == v)
            fail("view numbers must be distinct integers in 1.." + std::to_string(n_views));
        m(std::min(u, v) - 1, std::max(u, v) - 1) = *w;
    }
    return m;
}

std::string digest(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::string> save_outputs(const OutputBundle& bundle, const std::filesystem::path& dir) {
    if (!bundle.biclustering) throw InvalidConfig("nothing to save");
    std::filesystem::create_directories(dir);
    std::vector<std::string> written;
    const auto put = [&](const std::string& name, const std::string& contents) {
        write_atomic(dir / name, contents);
        written.push_back(name);
    };
    put("biclusters.json", biclusters_json(*bundle.biclustering, bundle.transposed));
    if (bundle.trace) put("selection.csv", selection_csv(*bundle.trace));
    if (bundle.scores) {
        MultiViewBisilhouette none;
        put("scores.csv", scores_csv(*bundle.scores, bundle.bisilhouette ? *bundle.bisilhouette : none));
    }
    if (bundle.bisilhouette)
        for (std::size_t v = 0; v < bundle.bisilhouette->per_view.size(); ++v)
            put("bisilhouette_plot_view" + std::to_string(v + 1) + ".csv",
                bisilhouette_plot_csv(bundle.bisilhouette->per_view[v]));
    return written;
}

}  // namespace resnmtf::io
