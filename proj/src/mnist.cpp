#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numeric>

#include <openssl/evp.h>

#include "lassopath/harness.hpp"
#include "lassopath/homotopy.hpp"
#include "lassopath/instance_lab.hpp"
#include "lassopath/linalg.hpp"
#include "lassopath/parallel.hpp"
#include "lassopath/rng.hpp"

namespace lassopath {

namespace {

constexpr std::uint32_t idx_ubyte_3d_magic = 0x00000803;

std::uint32_t read_be32(const std::vector<unsigned char>& bytes, std::size_t offset) {
    return std::uint32_t{bytes[offset]} << 24 | std::uint32_t{bytes[offset + 1]} << 16 |
           std::uint32_t{bytes[offset + 2]} << 8 | std::uint32_t{bytes[offset + 3]};
}

void write_be32(std::ofstream& out, std::uint32_t v) {
    const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                       static_cast<char>(v)};
    out.write(b, 4);
}

std::string sha256_hex(const std::vector<unsigned char>& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw FormatError("SHA-256 computation failed");
    }
    std::string out;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        out += buf;
    }
    return out;
}

// This rank test sits well above double rounding but far below anything a
// genuine pixel design produces.
constexpr double rank_tol = 1e-9;

}  // namespace

ImageDataset load_idx_images(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw FormatError("cannot open " + file.string());
    const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (bytes.size() < 4) throw TruncatedFile(file.string() + ": shorter than the IDX magic");
    const std::uint32_t magic = read_be32(bytes, 0);
    if (magic != idx_ubyte_3d_magic) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "0x%08x", magic);
        throw BadMagic(file.string() + ": magic " + buf + ", expected 0x00000803");
    }
    if (bytes.size() < 16) throw TruncatedFile(file.string() + ": header truncated");
    ImageDataset images;
    images.count = read_be32(bytes, 4);
    images.rows = read_be32(bytes, 8);
    images.cols = read_be32(bytes, 12);
    const std::size_t payload = images.count * images.rows * images.cols;
    if (bytes.size() < 16 + payload) {
        throw TruncatedFile(file.string() + ": expected " + std::to_string(payload) + " pixel bytes, found " +
                            std::to_string(bytes.size() - 16));
    }
    images.pixels.assign(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(payload));
    images.sha256 = sha256_hex(bytes);
    return images;
}

void write_idx_images(const std::filesystem::path& file, const ImageDataset& images) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw FormatError("cannot write " + file.string());
    write_be32(out, idx_ubyte_3d_magic);
    write_be32(out, static_cast<std::uint32_t>(images.count));
    write_be32(out, static_cast<std::uint32_t>(images.rows));
    write_be32(out, static_cast<std::uint32_t>(images.cols));
    out.write(reinterpret_cast<const char*>(images.pixels.data()), static_cast<std::streamsize>(images.pixels.size()));
}

ProblemInstance mnist_patch_instance(const ImageDataset& images, std::size_t n, std::size_t patch,
                                     std::uint64_t seed, std::uint32_t trial, std::uint32_t attempt) {
    if (patch < 3 || patch % 2 == 0) throw DomainError("patch size must be odd and at least 3");
    if (patch > images.rows || patch > images.cols) throw DomainError("patch larger than the images");
    if (n > images.count) throw DomainError("requested more images than the dataset holds");
    const std::size_t features = patch * patch - 1;
    if (features > n) throw DomainError("patch has more features than samples");

    const CounterRng rng(mix_seed(seed, patch));
    const std::uint32_t key = trial * 2 + attempt;

    std::vector<std::size_t> order(images.count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t pick = k + rng.below(images.count - k, Stream::ImageSampling, key, k);
        std::swap(order[k], order[pick]);
    }

    Matrix<Real> x(n, features);
    Vector<Real> y(n);
    const std::size_t half = patch / 2;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t top = rng.below(images.rows - patch + 1, Stream::PatchSampling, key, 2 * i);
        const std::size_t left = rng.below(images.cols - patch + 1, Stream::PatchSampling, key, 2 * i + 1);
        std::size_t f = 0;
        for (std::size_t r = 0; r < patch; ++r) {
            for (std::size_t c = 0; c < patch; ++c) {
                const Real v = Real(images.at(order[i], top + r, left + c)) / Real(255);
                if (r == half && c == half) {
                    y[i] = v;
                } else {
                    x(i, f++) = v;
                }
            }
        }
    }

    std::vector<std::size_t> nonzero;
    for (std::size_t j = 0; j < features; ++j) {
        if (norm_inf<Real>(x.col(j)) > Real(0)) nonzero.push_back(j);
    }
    ProblemInstance inst;
    inst.x = nonzero.size() == features ? std::move(x) : x.select_cols(nonzero);
    inst.y = std::move(y);
    inst.meta.generator = "mnist-patch-" + std::to_string(patch);
    inst.meta.seed = seed;
    inst.meta.trial_index = trial;
    return normalize(inst);
}

MnistResult run_mnist(const ImageDataset& images, const MnistOptions& opts) {
    if (opts.trials < 1) throw DomainError("mnist experiment needs trials >= 1");
    MnistResult result;
    result.options = opts;
    result.dataset_sha256 = images.sha256;

    const std::size_t sizes = opts.patch_sizes.size();
    result.records.resize(sizes * opts.trials);
    std::vector<std::size_t> effective_dim(result.records.size(), 0);
    parallel_for(result.records.size(), opts.workers, [&](std::size_t ti) {
        const std::size_t patch = opts.patch_sizes[ti / opts.trials];
        const auto trial = static_cast<std::uint32_t>(ti % opts.trials);
        RunRecord& rec = result.records[ti];
        rec.experiment = "mnist";
        rec.generator = "mnist-patch-" + std::to_string(patch);
        rec.n = opts.n;
        rec.seed = opts.seed;
        rec.trial_index = trial;
        rec.precision = opts.precision;
        const auto start = std::chrono::steady_clock::now();
        for (std::uint32_t attempt = 0; attempt < 2; ++attempt) {
            try {
                const ProblemInstance inst = mnist_patch_instance(images, opts.n, patch, opts.seed, trial, attempt);
                rec.d = effective_dim[ti] = inst.d();
                const auto sv = extremal_singular_values<double>(inst.x.cast<double>());
                if (!(sv.alpha > rank_tol * sv.beta)) throw RankDeficient("patch design is column rank deficient");
                PathOptions path_opts;
                path_opts.precision = opts.precision;
                const RegularizationPath path = solve_path(inst, path_opts);
                rec.segment_count = path.count();
                rec.breakpoint_count = path.breakpoints().size();
                rec.kkt_max_violation = path.diagnostics.max_kkt_violation;
                rec.ok = path.diagnostics.kkt_ok;
                rec.error = rec.ok ? "" : "KKT check failed";
                break;
            } catch (const RankDeficient& e) {
                rec.error = e.what();
            } catch (const SingularActiveSet& e) {
                rec.error = e.what();
            } catch (const LassoError& e) {
                rec.error = e.what();
                break;
            }
        }
        rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    std::vector<double> dims, patches, means;
    for (std::size_t p = 0; p < sizes; ++p) {
        MnistRow row;
        row.patch_size = opts.patch_sizes[p];
        row.feature_dim = row.patch_size * row.patch_size - 1;
        row.trials = opts.trials;
        std::vector<double> counts;
        double dim_sum = 0.0;
        for (std::size_t t = 0; t < opts.trials; ++t) {
            const RunRecord& rec = result.records[p * opts.trials + t];
            if (!rec.ok) {
                ++row.failed;
                continue;
            }
            counts.push_back(static_cast<double>(rec.segment_count));
            dim_sum += static_cast<double>(effective_dim[p * opts.trials + t]);
        }
        if (!counts.empty()) {
            row.mean_count = std::accumulate(counts.begin(), counts.end(), 0.0) / static_cast<double>(counts.size());
            row.mean_effective_dim = dim_sum / static_cast<double>(counts.size());
            double ss = 0.0;
            for (double v : counts) ss += (v - row.mean_count) * (v - row.mean_count);
            row.stddev = counts.size() > 1 ? std::sqrt(ss / static_cast<double>(counts.size() - 1)) : 0.0;
            dims.push_back(static_cast<double>(row.feature_dim));
            patches.push_back(static_cast<double>(row.patch_size));
            means.push_back(row.mean_count);
        }
        result.rows.push_back(row);
    }
    if (means.size() >= 2) {
        result.slope_vs_dim = log_log_slope(dims, means);
        result.slope_vs_patch = log_log_slope(patches, means);
    } else {
        result.slope_vs_dim = result.slope_vs_patch = std::nan("");
    }
    return result;
}

std::string mnist_csv(const MnistResult& result) {
    std::string out = "patch_size,feature_dim,mean_effective_dim,trials,failed,mean_count,stddev\n";
    char buf[256];
    for (const auto& r : result.rows) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%.2f,%zu,%zu,%.2f,%.2f\n", r.patch_size, r.feature_dim,
                      r.mean_effective_dim, r.trials, r.failed, r.mean_count, r.stddev);
        out += buf;
    }
    return out;
}

nlohmann::json mnist_json(const MnistResult& result) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : result.rows) {
        rows.push_back({{"patch_size", r.patch_size},
                        {"feature_dim", r.feature_dim},
                        {"mean_effective_dim", r.mean_effective_dim},
                        {"trials", r.trials},
                        {"failed", r.failed},
                        {"mean_count", r.mean_count},
                        {"stddev", r.stddev}});
    }
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : result.records) records.push_back(run_record_to_json(r));
    auto finite_or_null = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
    return {{"experiment", "mnist"},
            {"n", result.options.n},
            {"patch_sizes", result.options.patch_sizes},
            {"trials", result.options.trials},
            {"seed", result.options.seed},
            {"precision", std::string(to_string(result.options.precision))},
            {"dataset_sha256", result.dataset_sha256},
            {"slope_vs_feature_dim", finite_or_null(result.slope_vs_dim)},
            {"slope_vs_patch_size", finite_or_null(result.slope_vs_patch)},
            {"rows", rows},
            {"records", records}};
}

}  // namespace lassopath
