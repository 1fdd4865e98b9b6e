#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lassopath/instance.hpp"

namespace lassopath {

/// One solved trial of an experiment.
struct RunRecord {
    std::string experiment;
    std::string generator;
    std::size_t n = 0;
    std::size_t d = 0;
    double sigma = 0.0;
    std::optional<VarianceMode> variance_mode;
    std::uint64_t seed = 0;
    std::uint32_t trial_index = 0;
    std::size_t segment_count = 0;
    std::size_t breakpoint_count = 0;
    double wall_time_s = 0.0;
    PrecisionMode precision = PrecisionMode::Extended;
    double kkt_max_violation = 0.0;
    bool ok = false;
    std::string error;
};

nlohmann::json run_record_to_json(const RunRecord& r);

// ---------------------------------------------------------------- smoothed count table

struct Table1Options {
    std::vector<std::size_t> dims{4, 5, 6, 7, 8, 9, 10};
    // −log10 σ per row; std::nullopt is the unsmoothed row.
    std::vector<std::optional<int>> neg_log10_sigmas;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    PrecisionMode precision = PrecisionMode::Extended;
    unsigned workers = 0;
};

struct Table1Cell {
    std::size_t d = 0;
    std::optional<int> neg_log10_sigma;
    std::size_t trials = 0;
    std::size_t failed = 0;
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t min = 0;
    std::size_t max = 0;
    std::string error;  // first failure message

    bool all_failed() const { return failed == trials; }
};

struct Table1Result {
    Table1Options options;
    std::vector<Table1Cell> cells;  // row-major: sigma rows, then dims
    std::vector<RunRecord> records;

    const Table1Cell& cell(std::size_t d, std::optional<int> k) const;
};

/// Smoothing study on the worst-case construction: for each (d, k) the
/// adversarial instance gets PerEntry noise σ = 10^−k across `trials` seeds
/// derived from (seed, d, k); k = ∞ is traced once, unsmoothed. A failing
/// trial (solver error or KKT check) marks its cell instead of aborting.
Table1Result run_table1(const Table1Options& opts);

/// Wide layout: header "neg_log10_sigma,d=4,...", one row per σ, cells hold
/// the mean count ("FAILED" when every trial failed).
std::string table1_csv(const Table1Result& result);
/// Long layout with per-cell statistics.
std::string table1_cells_csv(const Table1Result& result);
nlohmann::json table1_json(const Table1Result& result);

std::vector<std::optional<int>> parse_sigma_list(const std::string& csv);

// ---------------------------------------------------------------- images

struct ImageDataset {
    std::size_t count = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> pixels;  // count × rows × cols, row-major
    std::string sha256;

    std::uint8_t at(std::size_t image, std::size_t r, std::size_t c) const {
        return pixels[(image * rows + r) * cols + c];
    }
};

/// IDX3 unsigned-byte image file: big-endian magic 0x00000803, then 32-bit
/// item, row and column counts, then the pixels. BadMagic / TruncatedFile.
ImageDataset load_idx_images(const std::filesystem::path& file);
void write_idx_images(const std::filesystem::path& file, const ImageDataset& images);

// ---------------------------------------------------------------- mnist

struct MnistOptions {
    std::size_t n = 1000;
    std::vector<std::size_t> patch_sizes{3, 5, 7, 9};
    std::size_t trials = 20;
    std::uint64_t seed = 0;
    PrecisionMode precision = PrecisionMode::Standard;
    unsigned workers = 0;
};

/// Centre-pixel regression instance for one trial: n distinct images, one
/// uniformly placed patch each, features = the other patch² − 1 pixels
/// scaled to [0, 1], target = centre pixel, y normalised, all-zero columns
/// dropped. `attempt` selects an independent redraw.
ProblemInstance mnist_patch_instance(const ImageDataset& images, std::size_t n, std::size_t patch,
                                     std::uint64_t seed, std::uint32_t trial, std::uint32_t attempt = 0);

struct MnistRow {
    std::size_t patch_size = 0;
    std::size_t feature_dim = 0;  // patch² − 1
    double mean_effective_dim = 0.0;
    std::size_t trials = 0;
    std::size_t failed = 0;
    double mean_count = 0.0;
    double stddev = 0.0;
};

struct MnistResult {
    MnistOptions options;
    std::string dataset_sha256;
    std::vector<MnistRow> rows;
    std::vector<RunRecord> records;
    double slope_vs_dim = 0.0;    // log-log slope of mean count vs patch² − 1
    double slope_vs_patch = 0.0;  // and vs patch size
};

MnistResult run_mnist(const ImageDataset& images, const MnistOptions& opts);
std::string mnist_csv(const MnistResult& result);
nlohmann::json mnist_json(const MnistResult& result);

/// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---------------------------------------------------------------- output

/// Plotting scripts written next to the CSV files; rendering is left to
/// the user (python3 + matplotlib).
std::string table1_plot_script();
std::string mnist_plot_script();

/// $LASSOPATH_OUT, or "results" when unset.
std::filesystem::path default_output_dir();

}  // namespace lassopath
