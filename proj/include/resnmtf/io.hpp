#pragma once

#include "resnmtf/metrics.hpp"
#include "resnmtf/model.hpp"
#include "resnmtf/pipeline.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace resnmtf::io {

struct LoadedView {
    Matrix data;
    std::vector<std::string> header;   // empty when the file has none
    double shift = 0.0;                // subtracted global minimum, if shifted
};

/// Comma-separated numeric matrix, one line per row. A first line with any
/// non-numeric field is taken as a header. Negative entries are rejected
/// unless allow_negative_shift, which subtracts the global minimum.
LoadedView parse_view(const std::string& text, bool allow_negative_shift = false);
LoadedView load_view(const std::filesystem::path& path, bool allow_negative_shift = false);

struct Preprocessed {
    std::vector<Matrix> views;
    /// kept[v][j] is the original column index of column j of views[v].
    std::vector<std::vector<Index>> kept;
};

/// Drops all-zero columns; with drop_low_variance also drops columns whose
/// population variance is below variance_floor.
Preprocessed preprocess(const std::vector<Matrix>& views, bool drop_low_variance,
                        double variance_floor);

/// Maps bicluster columns from preprocessed to original indices.
MultiViewBiclustering to_original_columns(const MultiViewBiclustering& bc,
                                          const std::vector<std::vector<Index>>& kept);

void write_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

/// Fixed-format number rendering used in every output file.
std::string format_number(double x);

/// 1-based JSON rendering of a biclustering.
std::string biclusters_json(const MultiViewBiclustering& bc, bool transposed = false);
MultiViewBiclustering parse_biclusters_json(const std::string& text);
MultiViewBiclustering load_biclusters(const std::filesystem::path& path);

std::string selection_csv(const SelectionTrace& trace);
std::string scores_csv(const EvalReport& report, const MultiViewBisilhouette& bis);
std::string bisilhouette_plot_csv(const BisilhouetteReport& report);

/// Lines "v,w,value" with 1-based view numbers; returns an n_views x n_views
/// upper-triangular matrix.
Matrix parse_pair_weights(const std::string& text, std::size_t n_views);

/// FNV-1a 64-bit digest rendered as 16 hex digits.
std::string digest(const std::string& bytes);

struct OutputBundle {
    const MultiViewBiclustering* biclustering = nullptr;
    const SelectionTrace* trace = nullptr;                 // optional
    const MultiViewBisilhouette* bisilhouette = nullptr;   // optional
    const EvalReport* scores = nullptr;                    // optional
    bool transposed = false;
};

/// Writes biclusters.json and whichever of selection.csv, scores.csv and
/// bisilhouette_plot_view<v>.csv the bundle has data for. Returns the file
/// names written. The manifest is written separately and last.
std::vector<std::string> save_outputs(const OutputBundle& bundle, const std::filesystem::path& dir);

}  // namespace resnmtf::io
